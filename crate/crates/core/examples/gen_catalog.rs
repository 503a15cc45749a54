//! Regenerates the shipped catalog.
//!
//! cargo run --release -p pathlink-core --example gen_catalog [-- <dir>]

use std::path::PathBuf;

use pathlink::catalog::{host_token, sha256_hex, Provenance, MANIFEST};
use pathlink::cyclic::k16_p13;
use pathlink::graph::{complete_graph, BlockShape, Design, Host};
use pathlink::io::{serialize_design, serialize_link_file, write_atomic, LinkFile};
use pathlink::linker::atoms::{build_atom, ATOMS};
use pathlink::oracle::{find_decomposition, OracleStatus, SearchBudget};

fn oracle_design(shape: BlockShape, n: usize) -> Design {
    for seed in 0..64 {
        let budget = SearchBudget::default().with_seed(seed).with_max_nodes(5_000_000);
        let out = find_decomposition(&complete_graph(n).unwrap(), shape, budget);
        if out.status == OracleStatus::Found {
            return Design::new(Host::Complete(n), shape, out.witness.unwrap().blocks);
        }
    }
    panic!("no {shape}-design of K_{n} found");
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog"));
    let mut files: Vec<(String, String)> = Vec::new();
    let mut entries: Vec<String> = Vec::new();

    for name in ATOMS {
        eprintln!("atom {name}");
        let dl = build_atom(name).expect("atom");
        let (dom, cod, link) = (format!("{name}.domain"), format!("{name}.codomain"), format!("{name}.link"));
        let lf = LinkFile { domain: dom.clone(), codomain: cod.clone(), map: dl.map.clone() };
        files.push((dom, serialize_design(&dl.domain)));
        files.push((cod, serialize_design(&dl.codomain)));
        files.push((link.clone(), serialize_link_file(&lf)));
        let prov = if *name == "bip9x24-apex" { Provenance::PaperListed } else { Provenance::Constructed };
        entries.push(format!("downlink {name} {link} {prov}"));
    }
    for (host_of, name) in [
        ("k8-drop", "k8-drop.domain"),
        ("k9-same", "k9-same.domain"),
        ("k16-same", "k16-same.domain"),
        ("k24-same", "k24-same.domain"),
        ("bip34", "bip34.domain"),
        ("bip43-drop", "bip43-drop.domain"),
        ("bip9x24-apex", "bip9x24-apex.domain"),
    ] {
        let dl = build_atom(host_of).unwrap();
        let prov = if host_of == "bip9x24-apex" { Provenance::PaperListed } else { Provenance::Constructed };
        entries.push(format!("design P5 {} {name} {prov}", host_token(&dl.domain.host).unwrap()));
    }
    for n in [6, 10, 11, 15, 16] {
        eprintln!("P6 on K{n}");
        let file = format!("p6-k{n}.design");
        files.push((file.clone(), serialize_design(&oracle_design(BlockShape::path(6), n))));
        entries.push(format!("design P6 K{n} {file} {}", Provenance::Oracle));
    }
    eprintln!("P13 on K16");
    files.push(("p13-k16.design".into(), serialize_design(&k16_p13().unwrap())));
    entries.push(format!("design P13 K16 p13-k16.design {}", Provenance::Constructed));

    let mut manifest = String::from("# pathlink base catalog\n");
    for (name, text) in &files {
        manifest.push_str(&format!("file {name} {}\n", sha256_hex(text)));
    }
    for e in &entries {
        manifest.push_str(e);
        manifest.push('\n');
    }
    for (name, text) in &files {
        write_atomic(&dir.join(name), text).unwrap();
    }
    write_atomic(&dir.join(MANIFEST), &manifest).unwrap();
    eprintln!("wrote {} files to {}", files.len() + 1, dir.display());
}
