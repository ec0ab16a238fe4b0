use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CALC: &str = "
def calc(pub w, a, b) -> v {
    m = a * b;
    v = w * (m - a - b) + a + b;
    assert_bool(w);
}
";

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        let w = Work {
            dir: tempfile::tempdir().unwrap(),
        };
        fs::write(w.path("calc.zkc"), CALC).unwrap();
        w
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_qapsnark"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert_eq!(
            code(&out),
            0,
            "{:?}: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    fn keys(&self, seed: &str) {
        self.ok(&["compile", "calc.zkc", "-o", "r1cs.json"]);
        self.ok(&[
            "--seed",
            seed,
            "setup",
            "--r1cs",
            "r1cs.json",
            "--pk",
            "pk.bin",
            "--vk",
            "vk.bin",
        ]);
    }

    fn prove(&self, seed: &str, inputs: &str, out: &str) {
        self.ok(&[
            "--seed", seed, "prove", "calc.zkc", "--pk", "pk.bin", "--inputs", inputs, "-o", out,
        ]);
    }

    fn verify(&self, proof: &str, public: &str) -> Output {
        self.run(&[
            "verify",
            "--vk",
            "vk.bin",
            "--proof",
            proof,
            "--r1cs",
            "r1cs.json",
            "--public",
            public,
        ])
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn bytes(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap()
}

#[test]
fn compile_reports_sizes() {
    let w = Work::new();
    assert!(w
        .ok(&["compile", "calc.zkc", "-o", "r1cs.json"])
        .contains("d=3 n=5 m=2"));
    let ranged = CALC.replace(
        "assert_bool(w);",
        "assert_bool(w);\n    assert_range(a, 4);",
    );
    fs::write(w.path("ranged.zkc"), ranged).unwrap();
    assert!(w
        .ok(&["compile", "ranged.zkc", "-o", "r.json"])
        .contains("d=8"));
}

#[test]
fn compile_errors_exit_one() {
    let w = Work::new();
    fs::write(w.path("empty.zkc"), "").unwrap();
    let out = w.run(&["compile", "empty.zkc", "-o", "r.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax"));
    assert_eq!(code(&w.run(&["compile", "missing.zkc", "-o", "r.json"])), 1);
}

#[test]
fn pipeline_accepts_and_rejects() {
    let w = Work::new();
    w.keys("1");
    w.prove("2", "w=1,a=3,b=2", "proof.bin");
    let out = w.verify("proof.bin", "w=1,v=6");
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("operation: pass"));

    let out = w.verify("proof.bin", "w=1,v=8");
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("operation: FAIL"));
    assert!(stdout(&out).contains("consistency: pass"));

    assert_eq!(code(&w.verify("proof.bin", "w=1")), 1);
    assert_eq!(code(&w.verify("proof.bin", "w=1,v=6,a=3")), 1);
    assert_eq!(code(&w.verify("proof.bin", "w=0x1,v=0x6")), 0);
}

#[test]
fn damaged_files_exit_one() {
    let w = Work::new();
    w.keys("1");
    w.prove("2", "w=0,a=3,b=2", "proof.bin");
    let proof = bytes(&w.path("proof.bin"));
    fs::write(w.path("short.bin"), &proof[..proof.len() - 3]).unwrap();
    assert_eq!(code(&w.verify("short.bin", "w=0,v=5")), 1);
    let out = w.run(&[
        "prove",
        "calc.zkc",
        "--pk",
        "pk.bin",
        "--inputs",
        "w=2,a=3,b=2",
        "-o",
        "p.bin",
    ]);
    assert_eq!(code(&out), 1);
    let out = w.run(&[
        "prove", "calc.zkc", "--pk", "pk.bin", "--inputs", "w=1,a=3", "-o", "p.bin",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = Work::new();
    let b = Work::new();
    for w in [&a, &b] {
        w.keys("7");
        w.prove("8", "w=1,a=4,b=5", "proof.bin");
    }
    for f in ["r1cs.json", "pk.bin", "vk.bin", "proof.bin"] {
        assert_eq!(bytes(&a.path(f)), bytes(&b.path(f)), "{}", f);
    }
    b.prove("9", "w=1,a=4,b=5", "proof.bin");
    assert_ne!(bytes(&a.path("proof.bin")), bytes(&b.path("proof.bin")));
}

#[test]
fn json_artifacts_work_like_binary_ones() {
    let w = Work::new();
    w.ok(&["compile", "calc.zkc", "-o", "r1cs.json"]);
    w.ok(&[
        "--seed",
        "3",
        "setup",
        "--r1cs",
        "r1cs.json",
        "--pk",
        "pk.json",
        "--vk",
        "vk.json",
    ]);
    w.ok(&[
        "--seed",
        "4",
        "prove",
        "calc.zkc",
        "--pk",
        "pk.json",
        "--inputs",
        "w=0,a=1,b=1",
        "-o",
        "proof.json",
    ]);
    let out = w.run(&[
        "verify",
        "--vk",
        "vk.json",
        "--proof",
        "proof.json",
        "--r1cs",
        "r1cs.json",
        "--public",
        "w=0,v=2",
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(w.path("vk.json")).unwrap();
    assert!(text.contains("\"backend\": \"insecure-sim-1fffffffffffffff\""));
}

#[test]
fn other_backends_are_refused() {
    let w = Work::new();
    w.keys("1");
    w.ok(&[
        "--modulus",
        "1000003",
        "compile",
        "calc.zkc",
        "-o",
        "small.json",
    ]);
    w.ok(&[
        "--seed",
        "1",
        "setup",
        "--r1cs",
        "small.json",
        "--pk",
        "spk.bin",
        "--vk",
        "svk.bin",
    ]);
    w.ok(&[
        "--seed",
        "2",
        "prove",
        "calc.zkc",
        "--pk",
        "spk.bin",
        "--inputs",
        "w=1,a=3,b=2",
        "-o",
        "sp.bin",
    ]);
    let out = w.run(&[
        "verify",
        "--vk",
        "svk.bin",
        "--proof",
        "sp.bin",
        "--r1cs",
        "small.json",
        "--public",
        "w=1,v=6",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&w.verify("sp.bin", "w=1,v=6")), 1);
}

#[test]
fn ceremony_round_trip() {
    let w = Work::new();
    w.ok(&["compile", "calc.zkc", "-o", "r1cs.json"]);
    w.ok(&["ceremony", "init", "--degree", "3", "-o", "tr.json"]);
    assert!(w
        .ok(&["ceremony", "verify", "tr.json"])
        .contains("0 contributions"));
    for seed in ["11", "12", "13"] {
        w.ok(&["--seed", seed, "ceremony", "contribute", "tr.json"]);
    }
    assert!(w
        .ok(&["ceremony", "verify", "tr.json"])
        .contains("3 contributions verified"));
    w.ok(&[
        "--seed",
        "5",
        "ceremony",
        "finalize",
        "tr.json",
        "--r1cs",
        "r1cs.json",
        "--pk",
        "pk.bin",
        "--vk",
        "vk.bin",
    ]);
    w.prove("6", "w=1,a=3,b=2", "proof.bin");
    assert_eq!(code(&w.verify("proof.bin", "w=1,v=6")), 0);
    w.ok(&[
        "--seed",
        "5",
        "setup",
        "--r1cs",
        "r1cs.json",
        "--pk",
        "pk2.bin",
        "--vk",
        "vk2.bin",
        "--transcript",
        "tr.json",
    ]);
    assert_eq!(bytes(&w.path("pk.bin")), bytes(&w.path("pk2.bin")));
}

#[test]
fn tampered_transcript_names_the_failed_check() {
    let w = Work::new();
    w.ok(&["ceremony", "init", "--degree", "3", "-o", "tr.json"]);
    for seed in ["1", "2", "3"] {
        w.ok(&["--seed", seed, "ceremony", "contribute", "tr.json"]);
    }
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(w.path("tr.json")).unwrap()).unwrap();
    let own = &mut doc["contributions"][1]["own"];
    let swapped = own["powers"][1].clone();
    own["powers"][1] = own["powers"][2].clone();
    own["powers"][2] = swapped;
    fs::write(
        w.path("bad.json"),
        serde_json::to_string_pretty(&doc).unwrap(),
    )
    .unwrap();
    let out = w.run(&["ceremony", "verify", "bad.json"]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("contribution 1"), "{}", text);
    assert!(text.contains("layering"), "{}", text);
    assert_eq!(code(&w.run(&["ceremony", "contribute", "bad.json"])), 1);
}

#[test]
fn polydemo_reproduces_the_plain_round() {
    let w = Work::new();
    let text = w.ok(&["--seed", "1", "polydemo"]);
    assert!(
        text.contains("p(r)=10626 t(r)=462 h(r)=23 accepted=true"),
        "{}",
        text
    );
    assert!(text.contains("encrypted proof accepted=true"));
    assert!(text.contains("forgery without alpha accepted=false"));
}
