mod common;

use std::sync::{Arc, Mutex};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use cc_curate::curate::{score_quality, ThresholdConfig};
use cc_curate::policy::{prepare, run_policy, Verdict, DEFAULT_MIN_WORDS};
use cc_curate::registry::api::router;
use cc_curate::registry::{example_collection, Registry};
use cc_curate::Document;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

struct Fixture {
    _dir: tempfile::TempDir,
    registry: Arc<Mutex<Registry>>,
    docs: Vec<Document>,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let mut reg = Registry::open(dir.path()).unwrap();
    let coll = example_collection();
    let id = coll.collection_id.clone();
    reg.register_collection(coll).unwrap();
    let sample: Vec<Document> = (0..40)
        .map(|i| {
            let mut d = Document::new(&id, format!("https://raad.example.nl/{i}"), "Zin. ".repeat(i + 1));
            d.quality_scores = Some(score_quality(&d.text));
            d
        })
        .collect();
    reg.store_sample(&id, &sample).unwrap();

    let docs = common::policy_corpus(7, 1000, 30);
    let (_, ledger, _) = prepare(&docs, DEFAULT_MIN_WORDS);
    reg.import_ledger(ledger, DEFAULT_MIN_WORDS).unwrap();
    Fixture { _dir: dir, registry: Arc::new(Mutex::new(reg)), docs }
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>, token: Option<&str>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header("authorization", format!("Bearer {t}"));
    }
    let req = match body {
        Some(v) => req.header("content-type", "application/json").body(Body::from(v.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

#[tokio::test]
async fn queue_is_byte_identical_to_library_output() {
    let f = fixture();
    let app = router(f.registry.clone(), None);
    let (status, body) = send(&app, "GET", "/domains/queue", None, None).await;
    assert_eq!(status, StatusCode::OK);
    let (_, _, queue) = prepare(&f.docs, DEFAULT_MIN_WORDS);
    assert!(!queue.items.is_empty());
    assert_eq!(body, serde_json::to_vec(&queue).unwrap());
}

#[tokio::test]
async fn thresholds_round_trip_with_version_bump() {
    let f = fixture();
    let app = router(f.registry.clone(), None);
    let (status, body) = send(&app, "GET", "/collections/openraadsinformatie/thresholds", None, None).await;
    assert_eq!(status, StatusCode::OK);
    let mut cfg: ThresholdConfig = serde_json::from_slice(&body).unwrap();
    assert_eq!(cfg.version, 0);

    cfg.version = 1;
    cfg.note = "tighter".into();
    let (status, _) = send(&app, "PUT", "/collections/openraadsinformatie/thresholds", Some(json!(cfg)), None).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = send(&app, "GET", "/collections/openraadsinformatie/thresholds", None, None).await;
    assert_eq!(serde_json::from_slice::<ThresholdConfig>(&body).unwrap(), cfg);

    // the same version again is stale
    let (status, body) = send(&app, "PUT", "/collections/openraadsinformatie/thresholds", Some(json!(cfg)), None).await;
    assert_eq!(status, StatusCode::CONFLICT, "{}", String::from_utf8_lossy(&body));
    assert!(serde_json::from_slice::<Value>(&body).unwrap()["error"].is_string());

    let (status, _) = send(&app, "PUT", "/collections/other/thresholds", Some(json!(cfg)), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "GET", "/collections/nope/thresholds", None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn verdicts_flow_into_allowlist_and_policy() {
    let f = fixture();
    let app = router(f.registry.clone(), None);
    let (status, _) = send(&app, "POST", "/domains/nowhere.example/verdict", Some(json!({"status": "verified_permissive"})), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (_, _, queue) = prepare(&f.docs, DEFAULT_MIN_WORDS);
    let domain = queue.items[0].domain.clone();
    let body = json!({"status": "unverified", "note": "", "reviewer": "r"});
    let (status, _) = send(&app, "POST", &format!("/domains/{domain}/verdict"), Some(body), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let body = json!({"status": "verified_permissive", "note": "checked footer", "reviewer": "r"});
    let (status, resp) = send(&app, "POST", &format!("/domains/{domain}/verdict"), Some(body.clone()), None).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(serde_json::from_slice::<Value>(&resp).unwrap()["status"], "verified_permissive");
    let (status, _) = send(&app, "POST", &format!("/domains/{domain}/verdict"), Some(body), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (_, queue_after) = send(&app, "GET", "/domains/queue", None, None).await;
    let queue_after: Value = serde_json::from_slice(&queue_after).unwrap();
    assert_eq!(queue_after["items"].as_array().unwrap().len(), queue.items.len() - 1);

    let (status, allowlist) = send(&app, "GET", "/allowlist", None, None).await;
    assert_eq!(status, StatusCode::OK);
    let verdicts = Verdict::read_jsonl(std::str::from_utf8(&allowlist).unwrap()).unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0].domain, domain);
    let kept = run_policy(&f.docs, &verdicts, DEFAULT_MIN_WORDS).kept;
    assert!(!kept.is_empty());
    assert!(kept.iter().all(|d| d.domain == domain));
}

#[tokio::test]
async fn buckets_and_collections() {
    let f = fixture();
    let app = router(f.registry.clone(), None);
    let (status, body) = send(&app, "GET", "/collections", None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_slice::<Value>(&body).unwrap()[0]["collection_id"], "openraadsinformatie");

    let (status, body) = send(&app, "GET", "/collections/openraadsinformatie/buckets?dimension=min_chars&edges=20,100", None, None).await;
    assert_eq!(status, StatusCode::OK);
    let report: Value = serde_json::from_slice(&body).unwrap();
    let counts: Vec<u64> = report["buckets"].as_array().unwrap().iter().map(|b| b["count"].as_u64().unwrap()).collect();
    let lens: Vec<usize> = (0..40).map(|i| "Zin. ".repeat(i + 1).chars().count()).collect();
    assert_eq!(counts.iter().sum::<u64>(), 40);
    assert_eq!(counts.len(), 3);
    assert_eq!(counts[0] as usize, lens.iter().filter(|&&l| (l as f64) < 20.0).count());

    let (status, _) = send(&app, "GET", "/collections/openraadsinformatie/buckets?dimension=shoe_size", None, None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "GET", "/collections/openraadsinformatie/buckets?dimension=min_chars&edges=5,1", None, None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn bearer_token_guards_mutations() {
    let f = fixture();
    let app = router(f.registry.clone(), Some("s3cret".into()));
    let (_, _, queue) = prepare(&f.docs, DEFAULT_MIN_WORDS);
    let uri = format!("/domains/{}/verdict", queue.items[0].domain);
    let body = json!({"status": "rejected"});
    let (status, _) = send(&app, "POST", &uri, Some(body.clone()), None).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    let (status, _) = send(&app, "POST", &uri, Some(body.clone()), Some("wrong")).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    let (status, _) = send(&app, "POST", &uri, Some(body), Some("s3cret")).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = send(&app, "GET", "/domains/queue", None, None).await;
    assert_eq!(status, StatusCode::OK);
}
