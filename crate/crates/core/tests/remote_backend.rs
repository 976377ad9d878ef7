//! RemoteBackend against an in-process HTTP server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use mhqg_core::backends::{Backend, BackendDescriptor, BackendError, RemoteBackend};
use mhqg_core::nlp::EntityType;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
struct Seen {
    path: String,
    body: Value,
}

/// Serves the scripted (status, body) replies in order, one per
/// connection, and records each request.
struct MockServer {
    url: String,
    seen: Arc<Mutex<Vec<Seen>>>,
}

fn read_request(stream: &mut TcpStream) -> Seen {
    let mut reader = BufReader::new(stream);
    let mut line = String::new();
    reader.read_line(&mut line).unwrap();
    let path = line.split_whitespace().nth(1).unwrap_or_default().to_string();
    let mut len = 0;
    loop {
        let mut h = String::new();
        reader.read_line(&mut h).unwrap();
        if h == "\r\n" || h.is_empty() {
            break;
        }
        if let Some((k, v)) = h.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                len = v.trim().parse().unwrap();
            }
        }
    }
    let mut body = vec![0; len];
    reader.read_exact(&mut body).unwrap();
    Seen { path, body: serde_json::from_slice(&body).unwrap_or(Value::Null) }
}

impl MockServer {
    fn start(replies: Vec<(u16, String)>) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}", listener.local_addr().unwrap());
        let seen = Arc::new(Mutex::new(Vec::new()));
        let log = seen.clone();
        thread::spawn(move || {
            for (status, body) in replies {
                let Ok((mut stream, _)) = listener.accept() else { return };
                log.lock().unwrap().push(read_request(&mut stream));
                let reason = match status {
                    200 => "OK",
                    422 => "Unprocessable Entity",
                    _ => "Error",
                };
                let resp = format!(
                    "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                let _ = stream.write_all(resp.as_bytes());
            }
        });
        Self { url, seen }
    }

    fn backend(&self, retries: u32) -> RemoteBackend {
        let mut d = BackendDescriptor::remote(self.url.clone());
        d.retries = retries;
        d.timeout_ms = 5_000;
        RemoteBackend::new(&d).with_backoff_base(Duration::from_millis(1))
    }

    fn seen(&self) -> Vec<Seen> {
        self.seen.lock().unwrap().clone()
    }
}

fn ok(v: Value) -> (u16, String) {
    (200, v.to_string())
}

const CONTEXT: &str = "Jenson Button (born 19 January 1980) is a British racing driver.";

#[test]
fn all_verbs_on_the_success_path() {
    let server = MockServer::start(vec![
        ok(json!({"question": "When was Jenson Button born?"})),
        ok(json!({"question": "When was Jenson Button born?", "answer": "19 January 1980"})),
        ok(json!({"sentence": "Jenson Button finished 4th."})),
        ok(json!({"fill": "driver"})),
        ok(json!({"score": 12.5})),
        ok(json!({"question": "What is the birthdate of the Driver?"})),
    ]);
    let b = server.backend(0);
    assert_eq!(b.gen_question_with_answer(CONTEXT, "19 January 1980").unwrap(), "When was Jenson Button born?");
    assert_eq!(
        b.gen_question_with_entity(CONTEXT, "Jenson Button").unwrap(),
        ("When was Jenson Button born?".to_string(), "19 January 1980".to_string())
    );
    assert_eq!(
        b.describe_entity("The Pos is 4. The Driver is Jenson Button.", "Jenson Button").unwrap(),
        "Jenson Button finished 4th."
    );
    assert_eq!(b.fill_mask("Who is the [MASK] that won?", EntityType::Person).unwrap(), "driver");
    assert_eq!(b.perplexity("Who directed Fargo?").unwrap(), 12.5);
    let steps = vec!["Return Driver".to_string(), "Return #1 in Pos 4".to_string()];
    assert_eq!(b.qdmr_to_question(&steps).unwrap(), "What is the birthdate of the Driver?");

    let seen = server.seen();
    let paths: Vec<&str> = seen.iter().map(|s| s.path.as_str()).collect();
    assert_eq!(
        paths,
        ["/v1/qg_ans", "/v1/qg_ent", "/v1/describe", "/v1/fill_mask", "/v1/perplexity", "/v1/qdmr2q"]
    );
    assert_eq!(seen[0].body, json!({"context": CONTEXT, "answer": "19 January 1980"}));
    assert_eq!(seen[1].body, json!({"context": CONTEXT, "entity": "Jenson Button"}));
    assert_eq!(
        seen[2].body,
        json!({"row": "The Pos is 4. The Driver is Jenson Button.", "entity": "Jenson Button"})
    );
    assert_eq!(seen[3].body, json!({"text": "Who is the [MASK] that won?", "hint": "PERSON"}));
    assert_eq!(seen[4].body, json!({"text": "Who directed Fargo?"}));
    assert_eq!(seen[5].body, json!({"steps": steps}));
}

#[test]
fn rejection_is_not_retried() {
    let server = MockServer::start(vec![(422, json!({"error": "no_question", "detail": "span too short"}).to_string())]);
    let err = server.backend(3).gen_question_with_answer(CONTEXT, "1980").unwrap_err();
    assert_eq!(err, BackendError::Rejected { error: "no_question".into(), detail: "span too short".into() });
    assert_eq!(server.seen().len(), 1);
}

#[test]
fn server_errors_are_retried() {
    let server = MockServer::start(vec![(500, "{}".into()), (503, "{}".into()), ok(json!({"score": 3.0}))]);
    assert_eq!(server.backend(2).perplexity("Who won?").unwrap(), 3.0);
    assert_eq!(server.seen().len(), 3);
}

#[test]
fn exhausted_retries_mean_unavailable() {
    let server = MockServer::start(vec![(500, "{}".into()), (500, "{}".into())]);
    let err = server.backend(1).perplexity("Who won?").unwrap_err();
    assert!(matches!(err, BackendError::Unavailable(_)), "{err:?}");
}

#[test]
fn refused_connection_is_unavailable() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut d = BackendDescriptor::remote(format!("http://127.0.0.1:{port}"));
    d.retries = 1;
    let b = RemoteBackend::new(&d).with_backoff_base(Duration::from_millis(1));
    assert!(matches!(b.perplexity("Who won?"), Err(BackendError::Unavailable(_))));
}

#[test]
fn malformed_replies_are_protocol_errors() {
    let server = MockServer::start(vec![
        (200, "not json".into()),
        ok(json!({"questions": "x"})),
        ok(json!({"question": "Who is he?", "answer": "1980"})),
        ok(json!({"question": "When was Jenson Button born?", "answer": "1979"})),
        ok(json!({"fill": "a very long fill"})),
        ok(json!({"score": -1.0})),
        ok(json!({"sentence": "Jenson Button won. He retired."})),
        (422, "oops".into()),
    ]);
    let b = server.backend(0);
    let protocol = |r: Result<String, BackendError>| matches!(r, Err(BackendError::Protocol(_)));
    assert!(protocol(b.gen_question_with_answer(CONTEXT, "1980")));
    assert!(protocol(b.gen_question_with_answer(CONTEXT, "1980")));
    assert!(matches!(b.gen_question_with_entity(CONTEXT, "Jenson Button"), Err(BackendError::Protocol(_))));
    assert!(matches!(b.gen_question_with_entity(CONTEXT, "Jenson Button"), Err(BackendError::Protocol(_))));
    assert!(protocol(b.fill_mask("the [MASK] won", EntityType::Other)));
    assert!(matches!(b.perplexity("x"), Err(BackendError::Protocol(_))));
    assert!(protocol(b.describe_entity("Driver is Jenson Button.", "Jenson Button")));
    assert!(protocol(b.gen_question_with_answer(CONTEXT, "1980")));
}

#[test]
fn preconditions_are_checked_before_sending() {
    let server = MockServer::start(vec![]);
    let b = server.backend(0);
    assert!(matches!(b.gen_question_with_answer(CONTEXT, " "), Err(BackendError::Precondition(_))));
    assert!(matches!(b.gen_question_with_entity(CONTEXT, "Ayrton Senna"), Err(BackendError::Precondition(_))));
    assert!(matches!(b.fill_mask("no mask here", EntityType::Other), Err(BackendError::Precondition(_))));
    assert!(matches!(b.fill_mask("[MASK] and [MASK]", EntityType::Other), Err(BackendError::Precondition(_))));
    assert!(matches!(b.perplexity(""), Err(BackendError::Precondition(_))));
    assert!(matches!(b.qdmr_to_question(&[]), Err(BackendError::Precondition(_))));
    assert!(server.seen().is_empty());
}

#[test]
fn descriptor_requires_endpoint() {
    let mut d = BackendDescriptor::remote("");
    assert!(d.validate().is_err());
    d.endpoint = None;
    assert!(d.validate().is_err());
    assert!(BackendDescriptor::remote("http://localhost:1").validate().is_ok());
}
