use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use qapsnark::algebra::{Field, FieldElement, Polynomial, DEFAULT_MODULUS};
use qapsnark::ceremony::CeremonyTranscript;
use qapsnark::circuit::{Circuit, Inputs, R1cs};
use qapsnark::group::Backend;
use qapsnark::kop::{
    forge_without_alpha, interactive_round, poly_prove, poly_setup, poly_verify, PolyProof,
};
use qapsnark::pinocchio::{
    prove, setup, setup_from_powers, verify_report, Proof, ProvingKey, VerificationKey,
};
use qapsnark::qap::build_qap;

#[derive(Parser)]
#[command(
    name = "qapsnark",
    version,
    about = "Circuit compiler and zk-SNARK toolkit (insecure simulated group)"
)]
struct Cli {
    /// Seed for all randomness. Omit for fresh entropy.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Prime field modulus used when compiling source.
    #[arg(long, global = true, default_value_t = DEFAULT_MODULUS)]
    modulus: u64,
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Sim)]
    backend: BackendArg,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    /// Exponent simulation. Not secure.
    Sim,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile source to R1CS JSON.
    Compile {
        source: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Generate proving and verification keys for a compiled circuit.
    Setup {
        #[arg(long)]
        r1cs: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        vk: PathBuf,
        /// Take the powers of s from a verified ceremony transcript.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Prove that the inputs satisfy the circuit.
    Prove {
        source: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        /// `name=value,...` for every parameter.
        #[arg(long)]
        inputs: String,
        #[arg(short = 'o', long)]
        out: PathBuf,
        #[arg(long)]
        no_zk: bool,
    },
    /// Check a proof against public values.
    Verify {
        #[arg(long)]
        vk: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        /// Compiled circuit, for the order of public names.
        #[arg(long)]
        r1cs: PathBuf,
        /// `name=value,...` for every public parameter and output.
        #[arg(long)]
        public: String,
    },
    #[command(subcommand)]
    Ceremony(CeremonyCmd),
    /// Walk through the polynomial-knowledge protocol on x^3 - 3x^2 + 2x.
    Polydemo {
        /// Evaluation point for the plaintext round.
        #[arg(long, default_value_t = 23)]
        r: u64,
    },
}

#[derive(Subcommand)]
enum CeremonyCmd {
    /// Start an empty transcript for polynomials up to `degree`.
    Init {
        #[arg(long)]
        degree: usize,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Verify the transcript and append a fresh contribution.
    Contribute {
        transcript: PathBuf,
        /// Defaults to overwriting the input.
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    Verify {
        transcript: PathBuf,
    },
    /// Derive circuit keys from the transcript.
    Finalize {
        transcript: PathBuf,
        #[arg(long)]
        r1cs: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        vk: PathBuf,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Reject,
}

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

/// Artifacts go to JSON when the path ends in `.json`, binary otherwise.
macro_rules! store {
    ($path:expr, $value:expr) => {{
        let path: &Path = $path;
        if is_json(path) {
            write(path, $value.to_json()?)
        } else {
            write(path, $value.to_bytes()?)
        }
    }};
}

macro_rules! load {
    ($t:ty, $path:expr) => {{
        let path: &Path = $path;
        let data = read(path)?;
        let parsed = if data.first() == Some(&b'{') {
            <$t>::from_json(std::str::from_utf8(&data)?)
        } else {
            <$t>::from_bytes(&data)
        };
        parsed.with_context(|| format!("parsing {}", path.display()))?
    }};
}

fn parse_value(field: Field, s: &str) -> Result<FieldElement> {
    let s = s.trim();
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match digits
        .strip_prefix("0x")
        .or_else(|| digits.strip_prefix("0X"))
    {
        Some(hex) => u128::from_str_radix(hex, 16),
        None => digits.parse::<u128>(),
    }
    .with_context(|| format!("bad value {:?}", s))?;
    let e = field.from_i128((v % field.modulus() as u128) as i128);
    Ok(if neg { -e } else { e })
}

fn parse_assignments(field: Field, s: &str) -> Result<Inputs> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected name=value, got {:?}", part))?;
        if out
            .insert(k.trim().to_string(), parse_value(field, v)?)
            .is_some()
        {
            bail!("{} assigned twice", k.trim());
        }
    }
    Ok(out)
}

fn load_r1cs(path: &Path) -> Result<R1cs> {
    R1cs::from_json(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_keys(pk_path: &Path, vk_path: &Path, pk: &ProvingKey, vk: &VerificationKey) -> Result<()> {
    store!(pk_path, pk)?;
    store!(vk_path, vk)?;
    println!(
        "keys for d={} n={} m={} ({})",
        pk.d(),
        pk.n(),
        pk.m,
        pk.backend().id()
    );
    Ok(())
}

fn keys_from_transcript(
    r1cs: &R1cs,
    transcript: &Path,
    rng: &mut ChaCha20Rng,
) -> Result<(ProvingKey, VerificationKey)> {
    let tr = CeremonyTranscript::from_json(&read_text(transcript)?)?;
    if tr.backend.scalar_field() != r1cs.field {
        bail!(
            "transcript backend {} does not match the circuit field",
            tr.backend.id()
        );
    }
    let qap = build_qap(r1cs)?;
    if tr.degree < qap.d {
        bail!(
            "transcript degree {} below circuit degree {}",
            tr.degree,
            qap.d
        );
    }
    let powers = tr.final_powers()?.powers;
    Ok(setup_from_powers(&qap, r1cs.m, &powers, rng)?)
}

fn run(cli: Cli) -> Result<Verdict> {
    let BackendArg::Sim = cli.backend;
    let field = Field::new(cli.modulus)?;
    let mut rng = rng(cli.seed);
    match cli.cmd {
        Cmd::Compile { source, out } => {
            let c = Circuit::from_source(&read_text(&source)?, field)?;
            let r = c.r1cs();
            write(&out, r.to_json())?;
            println!("d={} n={} m={}", r.d(), r.n, r.m);
        }
        Cmd::Setup {
            r1cs,
            pk,
            vk,
            transcript,
        } => {
            let r = load_r1cs(&r1cs)?;
            let (p, v) = match transcript {
                Some(t) => keys_from_transcript(&r, &t, &mut rng)?,
                None => setup(Backend::simulated(r.field), &build_qap(&r)?, r.m, &mut rng)?,
            };
            write_keys(&pk, &vk, &p, &v)?;
        }
        Cmd::Prove {
            source,
            pk,
            inputs,
            out,
            no_zk,
        } => {
            let key = load!(ProvingKey, &pk);
            let c = Circuit::from_source(&read_text(&source)?, key.backend().scalar_field())?;
            let qap = build_qap(c.r1cs())?;
            let w = c.witness(&parse_assignments(c.field(), &inputs)?)?;
            let proof = prove(&key, &qap, &w, &mut rng, !no_zk)?;
            store!(&out, proof)?;
            let shown: Vec<String> = c
                .public_names()
                .iter()
                .zip(c.public_values(&w))
                .map(|(n, v)| format!("{}={}", n, v.to_signed()))
                .collect();
            println!("public: {}", shown.join(","));
        }
        Cmd::Verify {
            vk,
            proof,
            r1cs,
            public,
        } => {
            let key = load!(VerificationKey, &vk);
            let proof = load!(Proof, &proof);
            let r = load_r1cs(&r1cs)?;
            if key.m() != r.m {
                bail!("key expects {} public values, circuit has {}", key.m(), r.m);
            }
            if key.backend() != proof.l.backend() {
                bail!(
                    "proof backend {} differs from key backend {}",
                    proof.l.backend().id(),
                    key.backend().id()
                );
            }
            let mut assigned = parse_assignments(key.backend().scalar_field(), &public)?;
            let mut values = Vec::with_capacity(r.m);
            for name in &r.var_names[1..=r.m] {
                values.push(
                    assigned
                        .remove(name)
                        .ok_or_else(|| anyhow!("missing public value {}", name))?,
                );
            }
            if let Some(extra) = assigned.keys().next() {
                bail!("{} is not a public variable", extra);
            }
            let report = verify_report(&key, &proof, &values)?;
            let mark = |b: bool| if b { "pass" } else { "FAIL" };
            for (side, ok) in ["left", "right", "output"].iter().zip(report.restriction) {
                println!("restriction ({}): {}", side, mark(ok));
            }
            println!("consistency: {}", mark(report.consistency));
            println!("operation: {}", mark(report.operation));
            if !report.accepted() {
                println!("reject");
                return Ok(Verdict::Reject);
            }
            println!("accept");
        }
        Cmd::Ceremony(cmd) => return ceremony(cmd, field, &mut rng),
        Cmd::Polydemo { r } => polydemo(field, r, &mut rng)?,
    }
    Ok(Verdict::Ok)
}

fn ceremony(cmd: CeremonyCmd, field: Field, rng: &mut ChaCha20Rng) -> Result<Verdict> {
    match cmd {
        CeremonyCmd::Init { degree, out } => {
            let tr = CeremonyTranscript::new(Backend::simulated(field), degree)?;
            write(&out, tr.to_json())?;
            println!("transcript for degree {} with 0 contributions", degree);
        }
        CeremonyCmd::Contribute { transcript, out } => {
            let mut tr = CeremonyTranscript::from_json(&read_text(&transcript)?)?;
            tr.contribute(rng)?;
            write(out.as_deref().unwrap_or(&transcript), tr.to_json())?;
            println!("added contribution {}", tr.contributions.len());
        }
        CeremonyCmd::Verify { transcript } => {
            let tr = CeremonyTranscript::from_json(&read_text(&transcript)?)?;
            if let Err(fail) = tr.verify() {
                println!("{}", fail);
                println!("reject");
                return Ok(Verdict::Reject);
            }
            println!("{} contributions verified", tr.contributions.len());
            println!("accept");
        }
        CeremonyCmd::Finalize {
            transcript,
            r1cs,
            pk,
            vk,
        } => {
            let r = load_r1cs(&r1cs)?;
            let tr = CeremonyTranscript::from_json(&read_text(&transcript)?)?;
            if let Err(fail) = tr.verify() {
                println!("{}", fail);
                return Ok(Verdict::Reject);
            }
            let (p, v) = keys_from_transcript(&r, &transcript, rng)?;
            write_keys(&pk, &vk, &p, &v)?;
        }
    }
    Ok(Verdict::Ok)
}

fn polydemo(field: Field, r: u64, rng: &mut ChaCha20Rng) -> Result<()> {
    let p = Polynomial::from_i64s(field, &[0, 2, -3, 1]);
    let t = Polynomial::from_i64s(field, &[2, -3, 1]);
    let (h, _) = p.divrem(&t)?;
    println!("p(x) = {}", p);
    println!("t(x) = {}", t);
    println!("h(x) = {}", h);
    let round =
        interactive_round(&p, &t, field.elem(r)).ok_or_else(|| anyhow!("t does not divide p"))?;
    println!(
        "plain round at r={}: p(r)={} t(r)={} h(r)={} accepted={}",
        r,
        round.p,
        round.t,
        round.h,
        round.p == round.t * round.h
    );

    let backend = Backend::simulated(field);
    let crs = poly_setup(backend, &t, 3, rng)?;
    let proof = poly_prove(&crs, &p, &t, rng)?;
    println!("encrypted proof accepted={}", poly_verify(&crs, &proof));
    let fake = forge_without_alpha(&crs.powers, &t, rng)?;
    let forged = PolyProof {
        g_p: fake.z_p,
        g_h: fake.z_h,
        g_p_shift: fake.z_p,
    };
    println!(
        "forgery without alpha accepted={}",
        poly_verify(&crs, &forged)
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Reject) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
