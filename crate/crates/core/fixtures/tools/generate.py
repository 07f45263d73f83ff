"""Regenerates the recorded-format SPARQL fixtures under fixtures/.

Member IRIs are synthetic; only the row counts and result shapes matter.
Run from crates/core: python3 fixtures/tools/generate.py
"""

import json
import random
from pathlib import Path
from xml.sax.saxutils import escape

ROOT = Path(__file__).resolve().parent.parent


def iri(v):
    return {"type": "uri", "value": v}


def lit(v, datatype=None, lang=None):
    t = {"type": "literal", "value": v}
    if datatype:
        t["datatype"] = datatype
    if lang:
        t["xml:lang"] = lang
    return t


def write_json(path, variables, rows, indent=1):
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"head": {"vars": variables}, "results": {"bindings": rows}}
    path.write_text(json.dumps(doc, indent=indent, ensure_ascii=False) + "\n")


def write_xml(path, variables, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    out = ['<?xml version="1.0"?>', '<sparql xmlns="http://www.w3.org/2005/sparql-results#">', "<head>"]
    out += [f'<variable name="{v}"/>' for v in variables]
    out += ["</head>", "<results>"]
    for r in rows:
        out.append("<result>")
        for k, t in r.items():
            out.append(f'<binding name="{k}"><uri>{escape(t["value"])}</uri></binding>')
        out.append("</result>")
    out += ["</results>", "</sparql>"]
    path.write_text("\n".join(out) + "\n")


COVERAGE = {
    ("en-dbpedia", "coverage-kvv"): 143,
    ("en-dbpedia", "coverage-vp"): 21,
    ("en-dbpedia", "coverage-us-house"): 14886,
    ("wikidata", "coverage-kvv"): 2996,
    ("wikidata", "coverage-vp"): 464,
    ("wikidata", "coverage-us-house"): 11160,
}


def coverage():
    base = ROOT / "coverage"
    for (dialect, tid), n in COVERAGE.items():
        if dialect == "wikidata":
            rows = [{"member": iri(f"http://www.wikidata.org/entity/Q{900000000 + i}")} for i in range(n)]
        else:
            body = tid.split("-", 1)[1].replace("-", "_")
            rows = [{"member": iri(f"http://dbpedia.org/resource/Synthetic_{body}_member_{i:05d}")} for i in range(n)]
        if (dialect, tid) == ("wikidata", "coverage-us-house"):
            write_xml(base / dialect / f"{tid}.xml", ["member"], rows)
        else:
            write_json(base / dialect / f"{tid}.json", ["member"], rows, indent=None)


DBR = "http://dbpedia.org/resource/"
NLR = "http://nl.dbpedia.org/resource/"
WD = "http://www.wikidata.org/entity/"
XSD_DATE = "http://www.w3.org/2001/XMLSchema#date"
XSD_YEAR = "http://www.w3.org/2001/XMLSchema#gYear"
XSD_DT = "http://www.w3.org/2001/XMLSchema#dateTime"

# party key -> (en-dbpedia IRI, nl-dbpedia IRI, wikidata IRI, label, alignment label)
PARTIES = {
    "nva": (DBR + "New_Flemish_Alliance", NLR + "Nieuw-Vlaamse_Alliantie", WD + "Q8000001", "New Flemish Alliance", "Right-wing"),
    "vu": (DBR + "People's_Union_(Belgium)", NLR + "Volksunie", WD + "Q8000002", "People's Union", "Centre-right"),
    "vb": (DBR + "Vlaams_Belang", NLR + "Vlaams_Belang", WD + "Q8000003", "Vlaams Belang", "Far-right"),
    "vblok": (DBR + "Vlaams_Blok", NLR + "Vlaams_Blok", WD + "Q8000004", "Vlaams Blok", "Far-right"),
    "cdv": (DBR + "Christian_Democratic_and_Flemish", NLR + "Christen-Democratisch_%26_Vlaams", WD + "Q8000005", "Christian Democratic and Flemish", "Centre"),
    "vld": (DBR + "Open_Flemish_Liberals_and_Democrats", NLR + "Open_Vld", WD + "Q8000006", "Open Flemish Liberals and Democrats", "Centre-right"),
    "vooruit": (DBR + "Vooruit_(political_party)", NLR + "Vooruit_(partij)", WD + "Q8000007", "Vooruit", "Centre-left"),
    "spa": (DBR + "Socialist_Party_Differently", NLR + "Socialistische_Partij_Anders", WD + "Q8000008", "Socialist Party Differently", "Centre-left"),
    "groen": (DBR + "Groen_(political_party)", NLR + "Groen_(partij)", WD + "Q8000009", "Groen", "Left-wing"),
    "pvda": (DBR + "Workers'_Party_of_Belgium", NLR + "Partij_van_de_Arbeid_van_België", WD + "Q8000010", "Workers' Party of Belgium", "Far-left"),
    "ldd": (DBR + "List_Dedecker", NLR + "Lijst_Dedecker", WD + "Q8000011", "List Dedecker", "Right-wing"),
    "labour": (DBR + "Labour_Party_(UK)", NLR + "Labour_Party_(Verenigd_Koninkrijk)", WD + "Q8000012", "Labour Party", "Centre-left"),
}

CAREER_PARTIES = [
    ["nva"], ["nva"], ["nva"], ["vu", "nva"], ["nva"], ["nva"], ["vu", "nva"], ["nva"],
    ["nva"], ["nva", "ldd"], ["vblok", "vb"], ["vb"], ["vb"], ["cdv"], ["cdv"], ["cdv", "nva"],
    ["vld"], ["vld"], ["spa", "vooruit"], ["vooruit"], ["groen"], ["groen"], ["pvda"], ["ldd"],
    ["nva"], ["cdv"], ["vld", "nva"], ["vb"], ["nva"], ["labour"], ["nva"], ["cdv"],
]


def career_rows(dialect, rng):
    col = {"en-dbpedia": 0, "nl-dbpedia": 1, "wikidata": 2}[dialect]
    rows = []
    for i, parties in enumerate(CAREER_PARTIES):
        if dialect == "wikidata":
            pid = f"{WD}Q{8100000 + i}"
        elif dialect == "nl-dbpedia":
            pid = f"{NLR}Synthetisch_politicus_{i:02d}"
        else:
            pid = f"{DBR}Synthetic_politician_{i:02d}"
        label = f"Synthetic Politician {i:02d}"
        start = rng.randint(1985, 2012)
        death = None
        if i % 11 == 5:
            death = start + rng.randint(8, 14)
        for j, key in enumerate(parties):
            s = start + 6 * j
            last = j == len(parties) - 1
            e = None if last and death is None and i % 4 != 0 else s + rng.randint(3, 9)
            row = {"politician": iri(pid), "label": lit(label, lang="en" if dialect == "en-dbpedia" else "nl")}
            row["party"] = iri(PARTIES[key][col])
            if dialect == "wikidata":
                row["start"] = lit(f"{s}-0{1 + j}-15T00:00:00Z", datatype=XSD_DT)
                if e is not None:
                    row["end"] = lit(f"{e}-06-30T00:00:00Z", datatype=XSD_DT)
            elif dialect == "en-dbpedia" and i % 3 == 0:
                row["start"] = lit(str(s), datatype=XSD_YEAR)
                if e is not None:
                    row["end"] = lit(str(e), datatype=XSD_YEAR)
            else:
                row["start"] = lit(f"{s}-0{1 + j}-15", datatype=XSD_DATE)
                if e is not None:
                    row["end"] = lit(f"{e}-06-30", datatype=XSD_DATE)
            if death is not None:
                row["death"] = lit(f"{death}-03-02", datatype=XSD_DATE)
            row["position"] = iri(PARTIES[key][col].rsplit("/", 1)[0] + "/Member_of_parliament")
            rows.append(row)
    # A politician with no recorded party and no dates.
    rows.append({"politician": iri(pid + "_b"), "label": lit("Undated Politician")})
    # An exact duplicate row, as paged endpoints sometimes return.
    rows.append(dict(rows[0]))
    return rows


def party_rows(dialect):
    col = {"en-dbpedia": 0, "nl-dbpedia": 1, "wikidata": 2}[dialect]
    country = {"en-dbpedia": DBR + "Belgium", "nl-dbpedia": NLR + "België", "wikidata": WD + "Q31"}[dialect]
    rows = []
    for key, p in PARTIES.items():
        if key == "labour":
            continue
        rows.append({"party": iri(p[col]), "label": lit(p[3]), "country": iri(country), "alignment": lit(p[4])})
    return rows


POL_VARS = ["politician", "label", "party", "start", "end", "death", "position"]
PARTY_VARS = ["party", "label", "country", "alignment"]


def fetch_fixture():
    base = ROOT / "fetch"
    base.mkdir(parents=True, exist_ok=True)
    (base / "manifest.toml").write_text('retrieved_at = "2022-03-01"\n')
    for dialect in ["en-dbpedia", "nl-dbpedia", "wikidata"]:
        rng = random.Random(f"kgdiv-{dialect}")
        write_json(base / dialect / "politicians.json", POL_VARS, career_rows(dialect, rng))
        if dialect == "nl-dbpedia":
            write_json(base / dialect / "parties.json", PARTY_VARS, [])
            write_json(base / dialect / "parties-via-party-property.json", PARTY_VARS, party_rows(dialect))
        else:
            write_json(base / dialect / "parties.json", PARTY_VARS, party_rows(dialect))


if __name__ == "__main__":
    coverage()
    fetch_fixture()
