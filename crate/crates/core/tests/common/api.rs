use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use splitter_core::server::{router, AppState, ServerConfig};
use tower::ServiceExt;

pub fn app() -> Router {
    router(AppState::new(ServerConfig::default()))
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req
        .body(body.map(|b| Body::from(b.to_owned())).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/api")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Replaces the game id in a create response with `<id>`; returns the id too.
pub fn mask_id(body: &str) -> (String, String) {
    let v: serde_json::Value = serde_json::from_str(body).unwrap();
    let id = v["game_id"].as_str().expect("game_id").to_owned();
    (body.replacen(&id, "<id>", 1), id)
}

pub const P5_CREATE: &str =
    r#"{"graph":{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4]]},"radius":1,"human_role":"connector","analysis":true}"#;
pub const K3_CREATE: &str =
    r#"{"graph":{"n":3,"edges":[[0,1],[1,2],[0,2]]},"radius":1,"human_role":"splitter","analysis":true}"#;

/// Runs the documented round trips; returns one failure message per mismatch.
pub async fn contract() -> Vec<String> {
    let app = app();
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: (StatusCode, String), status: StatusCode, body: Option<String>| {
        if got.0 != status {
            failures.push(format!("{what}: status {} != {status} ({})", got.0, got.1));
        } else if let Some(body) = body {
            if got.1 != body {
                failures.push(format!("{what}: body {} != {body}", got.1));
            }
        }
    };

    let (status, body) = call(&app, Method::POST, "/api/games", Some(P5_CREATE)).await;
    let (masked, id) = mask_id(&body);
    expect(
        "p5 create",
        (status, masked),
        StatusCode::CREATED,
        Some(fixture("p5_create.json")),
    );
    let game = format!("/api/games/{id}");
    let mv = format!("{game}/move");

    let got = call(&app, Method::GET, &format!("{game}/whatif?vertex=0"), None).await;
    expect("whatif while awaiting connector", got, StatusCode::CONFLICT, None);
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":9}"#)).await;
    expect("illegal move", got, StatusCode::BAD_REQUEST, None);
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":2}"#)).await;
    expect("p5 move 1", got, StatusCode::OK, Some(fixture("p5_move1.json")));
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":0}"#)).await;
    expect("move on a deleted vertex", got, StatusCode::BAD_REQUEST, None);
    let got = call(&app, Method::GET, &game, None).await;
    expect("p5 get", got, StatusCode::OK, Some(fixture("p5_get.json")));
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":1}"#)).await;
    expect("p5 move 2", got, StatusCode::OK, Some(fixture("p5_move2.json")));
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":1}"#)).await;
    expect("move after finish", got, StatusCode::CONFLICT, None);
    let got = call(&app, Method::DELETE, &game, None).await;
    expect("delete", got, StatusCode::NO_CONTENT, Some(String::new()));
    let got = call(&app, Method::GET, &game, None).await;
    expect("get after delete", got, StatusCode::NOT_FOUND, None);
    let got = call(&app, Method::POST, &mv, Some(r#"{"vertex":1}"#)).await;
    expect("move on unknown id", got, StatusCode::NOT_FOUND, None);

    let (status, body) = call(&app, Method::POST, "/api/games", Some(K3_CREATE)).await;
    let (masked, id) = mask_id(&body);
    expect(
        "k3 create",
        (status, masked),
        StatusCode::CREATED,
        Some(fixture("k3_create.json")),
    );
    let game = format!("/api/games/{id}");
    let got = call(&app, Method::GET, &format!("{game}/whatif?vertex=1"), None).await;
    expect("k3 whatif", got, StatusCode::OK, Some(fixture("k3_whatif.json")));
    let got = call(&app, Method::POST, &format!("{game}/move"), Some(r#"{"vertex":1}"#)).await;
    expect("k3 move", got, StatusCode::OK, Some(fixture("k3_move1.json")));
    let got = call(&app, Method::DELETE, &game, None).await;
    expect("k3 delete", got, StatusCode::NO_CONTENT, None);

    failures
}
