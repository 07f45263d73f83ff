#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Instant;

use kgdiv_core::kg::{serialize_results, RdfTerm, ResultFormat, ResultTable, Row};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn member_table(n: usize) -> ResultTable {
    let mut t = ResultTable::new(vec!["member".into()]);
    for i in 0..n {
        let mut r = Row::new();
        r.insert("member".into(), RdfTerm::iri(format!("http://example.org/m/{i:05}")));
        t.rows.push(r);
    }
    t
}

/// What the test server answers to the n-th request (0-based).
pub type Script = dyn Fn(usize) -> Option<u16> + Send + Sync;

/// Minimal SPARQL endpoint over a fixed table, honouring LIMIT / OFFSET in
/// the posted query. `script(n)` may force an HTTP status for request n.
pub struct SparqlServer {
    pub url: String,
    log: Arc<Mutex<Vec<(Instant, String)>>>,
}

impl SparqlServer {
    pub fn start(table: ResultTable, script: Box<Script>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/sparql", listener.local_addr().unwrap());
        let log: Arc<Mutex<Vec<(Instant, String)>>> = Arc::default();
        let log2 = log.clone();
        thread::spawn(move || {
            for (n, stream) in listener.incoming().enumerate() {
                let Ok(stream) = stream else { continue };
                serve(stream, n, &table, &*script, &log2);
            }
        });
        SparqlServer { url, log }
    }

    pub fn requests(&self) -> Vec<(Instant, String)> {
        self.log.lock().unwrap().clone()
    }
}

fn number_after(query: &str, keyword: &str) -> Option<usize> {
    query
        .lines()
        .find_map(|l| l.trim().strip_prefix(keyword))
        .and_then(|rest| rest.trim().parse().ok())
}

fn serve(
    stream: TcpStream,
    n: usize,
    table: &ResultTable,
    script: &Script,
    log: &Mutex<Vec<(Instant, String)>>,
) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut len = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 {
            return;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                len = v.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; len];
    reader.read_exact(&mut body).unwrap();
    let query = url::form_urlencoded::parse(&body)
        .find(|(k, _)| k == "query")
        .map(|(_, v)| v.into_owned())
        .unwrap_or_default();
    log.lock().unwrap().push((Instant::now(), query.clone()));

    let (status, payload, ctype) = match script(n) {
        Some(code) => (code, b"unavailable".to_vec(), "text/plain"),
        None => {
            let offset = number_after(&query, "OFFSET").unwrap_or(0);
            let limit = number_after(&query, "LIMIT").unwrap_or(usize::MAX);
            let end = offset.saturating_add(limit).min(table.rows.len());
            let page = ResultTable {
                variables: table.variables.clone(),
                rows: table.rows[offset.min(end)..end].to_vec(),
            };
            (
                200,
                serialize_results(&page, ResultFormat::SparqlJson),
                "application/sparql-results+json",
            )
        }
    };
    let mut out = stream;
    let head = format!(
        "HTTP/1.1 {status} X\r\nContent-Type: {ctype}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        payload.len()
    );
    let _ = out.write_all(head.as_bytes());
    let _ = out.write_all(&payload);
    let _ = out.flush();
}
