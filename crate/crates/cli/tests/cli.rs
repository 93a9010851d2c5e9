use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::{Arc, Mutex};
use std::thread;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn ontoforge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ontoforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("ELICIT_URL")
        .env_remove("ELICIT_AUTH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = ontoforge(dir, args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

/// Extracts and builds the hierarchy fixture into `dir/proj`.
fn hierarchy_project(dir: &Path) {
    ok(
        dir,
        &["extract", "--raw", &fx("hierarchy_corpus.txt"), "-o", "r.jsonl"],
    );
    ok(
        dir,
        &[
            "build",
            "r.jsonl",
            "--seeds",
            &fx("hierarchy_seeds.tsv"),
            "-d",
            "proj",
        ],
    );
}

#[test]
fn extract_relations_tagged() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ok(tmp.path(), &["extract", &fx("relations_tagged.txt")]);
    assert_eq!(out, "15 sentences, 15 records, 0 skipped\n");
    let recs = std::fs::read_to_string(tmp.path().join("records.jsonl")).unwrap();
    assert_eq!(recs.lines().count(), 15);
    assert_eq!(
        std::fs::read_to_string(tmp.path().join("skipped.log")).unwrap(),
        ""
    );
}

#[test]
fn extract_edge_cases() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("empty.txt"), "").unwrap();
    assert_eq!(
        ok(tmp.path(), &["extract", "empty.txt"]),
        "0 sentences, 0 records, 0 skipped\n"
    );

    std::fs::write(
        tmp.path().join("bad.txt"),
        "Rex/PROPN is/COP old/ADJ\nRex is/COP\n",
    )
    .unwrap();
    let o = ontoforge(tmp.path(), &["extract", "bad.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = ontoforge(tmp.path(), &["extract", "missing.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.txt"));

    std::fs::write(tmp.path().join("mixed.txt"), "Rex is old\nthe sky\n").unwrap();
    ok(tmp.path(), &["extract", "--raw", "mixed.txt"]);
    assert_eq!(
        std::fs::read_to_string(tmp.path().join("skipped.log")).unwrap(),
        "SKIP\tthe sky\n"
    );
}

#[test]
fn usage_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        ontoforge(tmp.path(), &["frobnicate"]).status.code(),
        Some(1)
    );
    assert_eq!(ontoforge(tmp.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn build_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    hierarchy_project(tmp.path());
    let first = std::fs::read(tmp.path().join("proj/lattice.json")).unwrap();
    let first_m = std::fs::read(tmp.path().join("proj/matrix.json")).unwrap();
    ok(
        tmp.path(),
        &[
            "build",
            "r.jsonl",
            "--seeds",
            &fx("hierarchy_seeds.tsv"),
            "-d",
            "proj",
        ],
    );
    assert_eq!(
        std::fs::read(tmp.path().join("proj/lattice.json")).unwrap(),
        first
    );
    assert_eq!(
        std::fs::read(tmp.path().join("proj/matrix.json")).unwrap(),
        first_m
    );
    let store = ontoforge::store::ProjectStore::new(tmp.path().join("proj"));
    let l = store.load_lattice().unwrap();
    let id = |s| l.node_by_label(s).unwrap();
    assert!(l.is_below(id("car"), id("physical")) && l.is_below(id("physical"), id("entity")));
}

#[test]
fn build_with_high_threshold_is_degenerate() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &["extract", "--raw", &fx("hierarchy_corpus.txt"), "-o", "r.jsonl"],
    );
    let out = ok(
        tmp.path(),
        &["build", "r.jsonl", "--tau", "100", "-d", "hi"],
    );
    assert!(out.contains("2 types, 1 cover edges"), "{out}");
}

#[test]
fn build_capacity_error_names_bound() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &["extract", "--raw", &fx("hierarchy_corpus.txt"), "-o", "r.jsonl"],
    );
    let o = ontoforge(tmp.path(), &["build", "r.jsonl", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains('3'), "{}", stderr(&o));
}

#[test]
fn query_hierarchy() {
    let tmp = tempfile::tempdir().unwrap();
    hierarchy_project(tmp.path());
    let out = ok(
        tmp.path(),
        &["query", "-d", "proj", "sensible", "HUNGRY", "car"],
    );
    assert!(out.starts_with("false\n"), "{out}");
    assert!(
        out.contains("car < vehicle < instrument < artifact < physical < entity"),
        "{out}"
    );
    let json: serde_json::Value = serde_json::from_str(&ok(
        tmp.path(),
        &["query", "-d", "proj", "--json", "sensible", "HUNGRY", "car"],
    ))
    .unwrap();
    assert_eq!(json["sensible"], false);
    assert_eq!(json["signature"], "living");
    let out = ok(
        tmp.path(),
        &["query", "-d", "proj", "sensible", "DRIVE", "human", "car"],
    );
    assert!(out.starts_with("true\n"), "{out}");
    let out = ok(
        tmp.path(),
        &["query", "-d", "proj", "signature", "MANUFACTURE/object"],
    );
    assert!(out.contains("instrument"), "{out}");

    for args in [
        &["query", "-d", "proj", "profile", "unicorn"][..],
        &["query", "-d", "proj", "sensible", "FLY", "car"],
        &["query", "-d", "proj", "supertype", "car", "unicorn"],
    ] {
        let o = ontoforge(tmp.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert_eq!(
        ontoforge(tmp.path(), &["query", "-d", "nowhere", "profile", "car"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn query_assembly_supertype() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &["extract", "--raw", &fx("assembly_corpus.txt"), "-o", "f.jsonl"],
    );
    ok(
        tmp.path(),
        &["build", "f.jsonl", "--seeds", &fx("assembly_seeds.tsv")],
    );
    let json: serde_json::Value = serde_json::from_str(&ok(
        tmp.path(),
        &["query", "--json", "supertype", "computer", "couch"],
    ))
    .unwrap();
    assert_eq!(json["labels"][0], "assemblable");
    assert!(json["node"].is_u64());
}

#[test]
fn elicit_offline_profile_book() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ok(
        tmp.path(),
        &[
            "elicit",
            "book",
            "--offline",
            "--transcripts",
            &fx("elicited_book/transcripts"),
            "--inflections",
            &fx("elicited_book/inflections.tsv"),
        ],
    );
    assert_eq!(out, "3 prompts, 72 records\n");
    ok(tmp.path(), &["build", "elicited.jsonl"]);
    let json: serde_json::Value =
        serde_json::from_str(&ok(tmp.path(), &["query", "--json", "profile", "book"])).unwrap();
    let obj = json.as_object().unwrap();
    let buckets: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| *k != "concept")
        .collect();
    assert_eq!(buckets, ["agentOf", "hasProp", "objectOf"]);
    assert!(json["objectOf"]
        .as_array()
        .unwrap()
        .contains(&"writing".into()));

    let o = ontoforge(
        tmp.path(),
        &[
            "elicit",
            "chair",
            "--offline",
            "--transcripts",
            &fx("elicited_book/transcripts"),
        ],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ingest_votes() {
    let tmp = tempfile::tempdir().unwrap();
    let t = |name: &str, body: &str| {
        let text = format!("PROMPT: p\nENDPOINT: e\nTIME: 0\n\n{body}");
        std::fs::write(tmp.path().join(name), text).unwrap();
    };
    t("a.txt", "1. heavy\n2. old\n");
    t("b.txt", "1. Old\n2. red\n");
    let args = [
        "ingest",
        "a.txt",
        "b.txt",
        "--concept",
        "car",
        "--dimension",
        "hasProp",
    ];
    assert_eq!(ok(tmp.path(), &args), "2 transcripts, 3 records\n");
    let mut two = args.to_vec();
    two.extend(["--min-vote", "2"]);
    assert_eq!(ok(tmp.path(), &two), "2 transcripts, 1 records\n");
    let recs = std::fs::read_to_string(tmp.path().join("ingested.jsonl")).unwrap();
    assert!(recs.contains("\"predicate\":\"OLD\""));
    let o = ontoforge(
        tmp.path(),
        &[
            "ingest",
            "a.txt",
            "--concept",
            "car",
            "--dimension",
            "inState",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn export_formats() {
    let tmp = tempfile::tempdir().unwrap();
    hierarchy_project(tmp.path());
    let dot = ok(tmp.path(), &["export", "proj/lattice.json"]);
    assert!(dot.contains("\"physical\" -> \"living\";"), "{dot}");
    ok(
        tmp.path(),
        &[
            "export",
            "proj/lattice.json",
            "--format",
            "json",
            "-o",
            "copy.json",
        ],
    );
    assert_eq!(
        std::fs::read(tmp.path().join("copy.json")).unwrap(),
        std::fs::read(tmp.path().join("proj/lattice.json")).unwrap()
    );
    assert_eq!(
        ontoforge(
            tmp.path(),
            &["export", "proj/lattice.json", "--format", "png"]
        )
        .status
        .code(),
        Some(1)
    );

    let text = std::fs::read_to_string(tmp.path().join("proj/lattice.json")).unwrap();
    std::fs::write(
        tmp.path().join("v2.json"),
        text.replace("\"formatVersion\": 1", "\"formatVersion\": 2"),
    )
    .unwrap();
    let o = ontoforge(tmp.path(), &["export", "v2.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("format version 2"), "{}", stderr(&o));

    std::fs::write(
        tmp.path().join("one.jsonl"),
        "{\"subject\":\"rock\",\"subjectKind\":\"concept\",\"predicate\":\"OLD\",\"slot\":\"arg0\",\"count\":1,\"sentence\":null}\n",
    )
    .unwrap();
    ok(tmp.path(), &["build", "one.jsonl", "-d", "single"]);
    let dot = ok(tmp.path(), &["export", "single/lattice.json"]);
    assert_eq!(dot.matches("[label=").count(), 1);
    assert_eq!(dot.matches(" -> ").count(), 0);
}

#[test]
fn synth_is_seeded() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |out: &'static str, seed: &'static str| {
        [
            "synth",
            "--seed",
            seed,
            "--records",
            "200",
            "--concepts",
            "50",
            "--properties",
            "40",
            "-o",
            out,
        ]
    };
    ok(tmp.path(), &args("a.jsonl", "9"));
    ok(tmp.path(), &args("b.jsonl", "9"));
    ok(tmp.path(), &args("c.jsonl", "10"));
    let read = |n: &str| std::fs::read(tmp.path().join(n)).unwrap();
    assert_eq!(read("a.jsonl"), read("b.jsonl"));
    assert_ne!(read("a.jsonl"), read("c.jsonl"));
    assert_eq!(
        ontoforge(
            tmp.path(),
            &[
                "synth",
                "--records",
                "10",
                "--concepts",
                "2",
                "--properties",
                "2"
            ]
        )
        .status
        .code(),
        Some(1)
    );
}

/// (Authorization header, body) of each request seen.
type RequestLog = Arc<Mutex<Vec<(String, String)>>>;

/// Answers every request with a fixed numbered list.
fn mock_endpoint(requests: usize) -> (String, RequestLog) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/complete", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for stream in listener.incoming().take(requests) {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let (mut len, mut auth) = (0usize, String::new());
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end();
                if line.is_empty() {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                if lower.starts_with("authorization:") {
                    auth = line["authorization:".len()..].trim().to_string();
                }
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            log.lock()
                .unwrap()
                .push((auth, String::from_utf8(body).unwrap()));
            let reply = "Sure:\n1. Heavy\n2. old\n3. heavy\n";
            write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            )
            .unwrap();
        }
    });
    (url, seen)
}

#[test]
fn elicit_over_http_then_offline() {
    let tmp = tempfile::tempdir().unwrap();
    let (url, seen) = mock_endpoint(3);
    let o = Command::new(env!("CARGO_BIN_EXE_ontoforge"))
        .args(["elicit", "rock", "-k", "3", "--max-in-flight", "2"])
        .current_dir(tmp.path())
        .env("ELICIT_URL", &url)
        .env("ELICIT_AUTH", "Bearer test-token")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "3 prompts, 6 records\n");
    let seen = seen.lock().unwrap().clone();
    assert_eq!(seen.len(), 3);
    assert!(seen.iter().all(|(auth, _)| auth == "Bearer test-token"));
    assert!(seen
        .iter()
        .any(|(_, body)| body.contains("a very [MASK] rock")));
    assert_eq!(
        std::fs::read_dir(tmp.path().join("transcripts"))
            .unwrap()
            .count(),
        3
    );
    let first = std::fs::read(tmp.path().join("elicited.jsonl")).unwrap();

    // the server is gone; cached transcripts give the same records
    let again = ok(tmp.path(), &["elicit", "rock", "-k", "3", "--offline"]);
    assert_eq!(again, "3 prompts, 6 records\n");
    assert_eq!(
        std::fs::read(tmp.path().join("elicited.jsonl")).unwrap(),
        first
    );
}
