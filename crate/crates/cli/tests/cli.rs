use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pathlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathlink")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn block_count(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().filter(|l| l.starts_with("block ")).count()
}

#[test]
fn construct_p4_on_k34() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k34.design");
    let o = pathlink(&["construct", "--shape", "P4", "--host", "K3,4", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(block_count(&out), 4);
    assert_eq!(code(&pathlink(&["verify", out.to_str().unwrap()])), 0);
}

#[test]
fn construct_c4_by_difference_family() {
    let o = pathlink(&["construct", "--shape", "C4", "--host", "K17", "--method", "difference-family"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("block ")).count(), 34);
}

#[test]
fn construct_apex_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.edges");
    // K_6 minus the edge 2-3; vertices 0 and 1 are universal. 14 edges.
    let mut text = String::new();
    for u in 0..6 {
        for v in u + 1..6 {
            if (u, v) != (2, 3) {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    fs::write(&edges, text).unwrap();
    let host = format!("edges:{}", edges.display());
    let o = pathlink(&["construct", "--shape", "P4", "--host", &host, "--apex", "0,1", "--trace"]);
    // 14 ≡ 2 (mod 3): two edges are left over.
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("# case ")), "{s}");
    assert_eq!(s.matches("leftover edge").count(), 2);
}

#[test]
fn verify_findings_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.design");
    fs::write(&bad, "design P4 host=K 4\nblock 0 1 2 3\nblock 0 1 3 2\n").unwrap();
    let o = pathlink(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("DuplicateEdge"), "{}", stdout(&o));

    let broken = dir.path().join("broken.design");
    fs::write(&broken, "desgin P4\n").unwrap();
    let o = pathlink(&["verify", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn verify_shipped_k9_24_design() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/catalog/bip9x24-apex.domain");
    assert_eq!(code(&pathlink(&["verify", path.to_str().unwrap()])), 0);
    let link = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/catalog/bip9x24-apex.link");
    assert_eq!(code(&pathlink(&["verify", link.to_str().unwrap()])), 0);
}

#[test]
fn downlink_c4_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w");
    let o = pathlink(&["downlink", "--gamma", "C4", "--v", "25", "--target", "25", "-o", w.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(block_count(&w.join("codomain.design")), 100);
    assert_eq!(code(&pathlink(&["verify", w.to_str().unwrap()])), 0);
}

#[test]
fn downlink_p5_and_bad_target() {
    let o = pathlink(&["downlink", "--gamma", "P5", "--v", "16", "--target", "15", "--trace"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("# "));
    let o = pathlink(&["downlink", "--gamma", "P5", "--v", "33", "--target", "32"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn embed_keeps_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let d9 = dir.path().join("d9.pld");
    let d12 = dir.path().join("d12.pld");
    assert_eq!(code(&pathlink(&["construct", "--shape", "P4", "--host", "K9", "-o", d9.to_str().unwrap()])), 0);
    let o = pathlink(&["embed", "--shape", "P4", "--design", d9.to_str().unwrap(), "--m", "12", "-o", d12.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let small: Vec<String> = fs::read_to_string(&d9).unwrap().lines().filter(|l| l.starts_with("block")).map(String::from).collect();
    let big = fs::read_to_string(&d12).unwrap();
    assert_eq!(small.len(), 12);
    assert!(small.iter().all(|b| big.lines().any(|l| l == b)));
    assert_eq!(block_count(&d12), 22);
}

#[test]
fn oracle_exit_codes() {
    assert_eq!(code(&pathlink(&["oracle", "--shape", "P4", "--graph", "K6"])), 0);
    assert_eq!(code(&pathlink(&["oracle", "--shape", "P4", "--graph", "K5"])), 1);
    let o = pathlink(&["oracle", "--shape", "P5", "--graph", "K16", "--max-nodes", "3"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
}

#[test]
fn spectrum_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = pathlink(&["spectrum", "--gamma", "P5", "--v", "8", "--n-max", "13", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("witnessed   {7,9,10,12,13}"));
    for n in [7, 9, 10, 12, 13] {
        let w = dir.path().join(format!("n{n}"));
        assert_eq!(code(&pathlink(&["verify", w.to_str().unwrap()])), 0, "n = {n}");
    }
    assert_eq!(code(&pathlink(&["spectrum", "--gamma", "C4", "--v", "10", "--n-max", "15"])), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&pathlink(&["frobnicate"])), 3);
    assert_eq!(code(&pathlink(&["construct", "--shape", "P4", "--host", "K5"])), 3);
    assert_eq!(code(&pathlink(&["construct", "--shape", "Q4", "--host", "K6"])), 3);
    assert_eq!(code(&pathlink(&["construct", "--shape", "P7", "--host", "K13"])), 2);
}
