mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use common::{member_table, SparqlServer};
use kgdiv_core::kg::{Dialect, EndpointConfig, KgError, QueryTemplate, SparqlClient, TEMPLATE_MARKER};

fn template() -> QueryTemplate {
    QueryTemplate::new(
        "members",
        Dialect::Wikidata,
        vec![],
        vec!["member".into()],
        "SELECT ?member WHERE { ?member ?p ?o } ORDER BY ?member",
    )
    .unwrap()
}

fn endpoint(url: &str, page_size: usize, rate: f64) -> EndpointConfig {
    let mut e = EndpointConfig::new(url, Dialect::Wikidata);
    e.page_size = page_size;
    e.max_requests_per_second = rate;
    e.retry_limit = 2;
    e.backoff_ms = 10;
    e.timeout_secs = 5;
    e
}

#[test]
fn pages_until_short_page() {
    let server = SparqlServer::start(member_table(250), Box::new(|_| None));
    let client = SparqlClient::http(endpoint(&server.url, 100, 1000.0)).unwrap();
    let table = client.execute_query(&template(), &BTreeMap::new()).unwrap();
    assert_eq!(table.rows.len(), 250);
    let reqs = server.requests();
    assert_eq!(reqs.len(), 3);
    for (i, (_, q)) in reqs.iter().enumerate() {
        assert!(q.starts_with(&format!("{TEMPLATE_MARKER}members")));
        assert!(q.contains("LIMIT 100"));
        assert!(q.contains(&format!("OFFSET {}", i * 100)));
    }
}

#[test]
fn exact_multiple_needs_one_empty_page() {
    let server = SparqlServer::start(member_table(200), Box::new(|_| None));
    let client = SparqlClient::http(endpoint(&server.url, 100, 1000.0)).unwrap();
    let table = client.execute_query(&template(), &BTreeMap::new()).unwrap();
    assert_eq!(table.rows.len(), 200);
    assert_eq!(server.requests().len(), 3);
}

#[test]
fn transient_errors_are_retried() {
    let server = SparqlServer::start(member_table(30), Box::new(|n| (n < 2).then_some(503)));
    let client = SparqlClient::http(endpoint(&server.url, 100, 1000.0)).unwrap();
    let table = client.execute_query(&template(), &BTreeMap::new()).unwrap();
    assert_eq!(table.rows.len(), 30);
    assert_eq!(server.requests().len(), 3);
}

#[test]
fn retries_give_up_after_limit() {
    let server = SparqlServer::start(member_table(30), Box::new(|_| Some(503)));
    let client = SparqlClient::http(endpoint(&server.url, 100, 1000.0)).unwrap();
    let err = client.execute_query(&template(), &BTreeMap::new()).unwrap_err();
    assert!(matches!(err, KgError::Http { status: 503, attempts: 3, .. }), "{err:?}");
}

#[test]
fn client_errors_are_not_retried() {
    let server = SparqlServer::start(member_table(30), Box::new(|_| Some(400)));
    let client = SparqlClient::http(endpoint(&server.url, 100, 1000.0)).unwrap();
    let err = client.execute_query(&template(), &BTreeMap::new()).unwrap_err();
    assert!(matches!(err, KgError::Http { status: 400, attempts: 1, .. }), "{err:?}");
    assert_eq!(server.requests().len(), 1);
}

#[test]
fn unreachable_endpoint_is_a_transport_error() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let url = format!("http://127.0.0.1:{port}/sparql");
    let client = SparqlClient::http(endpoint(&url, 100, 1000.0)).unwrap();
    let err = client.execute_query(&template(), &BTreeMap::new()).unwrap_err();
    assert!(matches!(err, KgError::Transport { attempts: 3, .. }), "{err:?}");
}

#[test]
fn requests_respect_rate_cap() {
    let server = SparqlServer::start(member_table(50), Box::new(|_| None));
    let client = SparqlClient::http(endpoint(&server.url, 10, 20.0)).unwrap();
    let table = client.execute_query(&template(), &BTreeMap::new()).unwrap();
    let ids: BTreeSet<_> = table.rows.iter().map(|r| r["member"].value().to_owned()).collect();
    assert_eq!(ids.len(), 50);
    let times: Vec<_> = server.requests().into_iter().map(|r| r.0).collect();
    assert_eq!(times.len(), 6);
    for w in times.windows(2) {
        // Arrival jitter on loopback is well under the 50 ms interval.
        assert!(w[1] - w[0] >= Duration::from_millis(45), "{:?}", w[1] - w[0]);
    }
}
