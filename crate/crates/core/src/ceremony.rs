//! Sequential multi-party generation of encrypted powers.
//!
//! Each participant raises the previous accumulated powers by their own
//! secrets `(s_P, alpha_P)` and publishes both the new accumulation and the
//! encryptions of their secrets. Anyone can then check with pairings that
//! every published set is internally consistent and layered on its
//! predecessor. The composite secret is unknown unless every participant
//! colludes.
//!
//! The checks cover exactly the published encryptions; participants do not
//! prove knowledge of `s_P` or `alpha_P`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{FieldElement, Polynomial};
use crate::codec::{hex_list, parse_list, CodecError};
use crate::group::{Backend, GroupElement};
use crate::kop::{KopError, PolyCrs};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CeremonyError {
    #[error("prior transcript does not verify: {0}")]
    InvalidPriorTranscript(TranscriptFailure),
    #[error("transcript does not verify: {0}")]
    UnverifiedTranscript(TranscriptFailure),
    #[error("transcript has no contributions")]
    EmptyTranscript,
    #[error("ceremony degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Kop(#[from] KopError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// `(g^(s^i), g^alpha, g^(alpha s^i))` for `i` in `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrsPowers {
    pub powers: Vec<GroupElement>,
    pub alpha: GroupElement,
    pub alpha_powers: Vec<GroupElement>,
}

impl CrsPowers {
    /// The "empty" string over the bare generator (`s = alpha = 1`).
    pub fn generator(backend: Backend, degree: usize) -> Self {
        let g = backend.generator();
        CrsPowers {
            powers: vec![g; degree + 1],
            alpha: g,
            alpha_powers: vec![g; degree + 1],
        }
    }

    fn from_secrets(backend: Backend, degree: usize, s: FieldElement, alpha: FieldElement) -> Self {
        let mut powers = Vec::with_capacity(degree + 1);
        let mut alpha_powers = Vec::with_capacity(degree + 1);
        let mut si = backend.scalar_field().one();
        for _ in 0..=degree {
            powers.push(backend.encrypt(si));
            alpha_powers.push(backend.encrypt(alpha * si));
            si *= s;
        }
        CrsPowers {
            powers,
            alpha: backend.encrypt(alpha),
            alpha_powers,
        }
    }

    pub fn degree(&self) -> usize {
        self.powers.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub participant: usize,
    pub accumulated: CrsPowers,
    pub own: CrsPowers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Accumulated,
    Own,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Sequence lengths, participant order.
    Structure,
    /// `e(g^(s^i), g) = e(g^(s^1), g^(s^(i-1)))`, and `g^(s^0) = g`.
    PowerChain,
    /// `e(g^(s^i), g^alpha) = e(g^(alpha s^i), g)`
    AlphaShift,
    /// Accumulated value is the pairing-checked product of the previous
    /// accumulation and the participant's own secret.
    Layering,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Structure => "structure",
            Check::PowerChain => "power-chain",
            Check::AlphaShift => "alpha-shift",
            Check::Layering => "layering",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckFailure {
    pub check: Check,
    pub subject: Subject,
    /// Power index where the check failed; `None` for the alpha element or
    /// structural problems.
    pub index: Option<usize>,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = match self.subject {
            Subject::Accumulated => "accumulated",
            Subject::Own => "own",
        };
        match self.index {
            Some(i) => write!(
                f,
                "{} check failed ({} powers, index {})",
                self.check, subject, i
            ),
            None => write!(f, "{} check failed ({})", self.check, subject),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContributionReport {
    pub failures: Vec<CheckFailure>,
    /// The participant's secrets look like the identity (`s_P = 1` or
    /// `alpha_P = 1`). Detectable here only because elements are canonical;
    /// reported, not rejected.
    pub weak: bool,
}

impl ContributionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, check: Check) -> bool {
        self.failures.iter().any(|f| f.check == check)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptFailure {
    pub contribution: usize,
    pub failures: Vec<CheckFailure>,
}

impl fmt::Display for TranscriptFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contribution {}: ", self.contribution)?;
        for (k, fail) in self.failures.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}", fail)?;
        }
        Ok(())
    }
}

fn self_consistency(set: &CrsPowers, subject: Subject, out: &mut Vec<CheckFailure>) {
    let backend = set.alpha.backend();
    let g = backend.generator();
    let e = |a: &GroupElement, b: &GroupElement| backend.try_pairing(a, b).ok();
    let mut fail = |check, index| {
        out.push(CheckFailure {
            check,
            subject,
            index,
        })
    };
    if set.powers[0] != g {
        fail(Check::PowerChain, Some(0));
    }
    for i in 2..set.powers.len() {
        if e(&set.powers[i], &g) != e(&set.powers[1], &set.powers[i - 1]) {
            fail(Check::PowerChain, Some(i));
        }
    }
    for i in 0..set.powers.len() {
        if e(&set.powers[i], &set.alpha) != e(&set.alpha_powers[i], &g) {
            fail(Check::AlphaShift, Some(i));
        }
    }
}

/// Runs the three families of checks on `cur` against the previous
/// accumulated powers (the generator string for the first participant).
pub fn verify_contribution(prev: &CrsPowers, cur: &Contribution) -> ContributionReport {
    let mut report = ContributionReport::default();
    let d = prev.powers.len();
    let shapes_ok = [
        &cur.accumulated.powers,
        &cur.accumulated.alpha_powers,
        &cur.own.powers,
        &cur.own.alpha_powers,
    ]
    .iter()
    .all(|v| v.len() == d)
        && prev.alpha_powers.len() == d
        && d >= 2;
    if !shapes_ok {
        report.failures.push(CheckFailure {
            check: Check::Structure,
            subject: Subject::Accumulated,
            index: None,
        });
        return report;
    }
    let backend = prev.alpha.backend();
    let same_backend = [&cur.accumulated.alpha, &cur.own.alpha]
        .iter()
        .all(|g| g.backend() == backend);
    if !same_backend {
        report.failures.push(CheckFailure {
            check: Check::Structure,
            subject: Subject::Own,
            index: None,
        });
        return report;
    }

    self_consistency(&cur.accumulated, Subject::Accumulated, &mut report.failures);
    self_consistency(&cur.own, Subject::Own, &mut report.failures);

    let g = backend.generator();
    let e = |a: &GroupElement, b: &GroupElement| backend.pairing(a, b);
    let mut layer = |index| {
        report.failures.push(CheckFailure {
            check: Check::Layering,
            subject: Subject::Accumulated,
            index,
        })
    };
    for i in 0..d {
        if e(&cur.accumulated.powers[i], &g) != e(&prev.powers[i], &cur.own.powers[i]) {
            layer(Some(i));
        }
    }
    if e(&cur.accumulated.alpha, &g) != e(&prev.alpha, &cur.own.alpha) {
        layer(None);
    }
    for i in 0..d {
        if e(&cur.accumulated.alpha_powers[i], &g)
            != e(&prev.alpha_powers[i], &cur.own.alpha_powers[i])
        {
            layer(Some(i));
        }
    }

    report.weak = cur.own.powers[1] == g || cur.own.alpha == g || cur.accumulated == *prev;
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeremonyTranscript {
    pub backend: Backend,
    pub degree: usize,
    pub contributions: Vec<Contribution>,
}

impl CeremonyTranscript {
    pub fn new(backend: Backend, degree: usize) -> Result<Self, CeremonyError> {
        if degree == 0 {
            return Err(CeremonyError::ZeroDegree);
        }
        Ok(CeremonyTranscript {
            backend,
            degree,
            contributions: Vec::new(),
        })
    }

    /// Current accumulated powers; the generator string before anyone
    /// has contributed.
    pub fn latest(&self) -> CrsPowers {
        match self.contributions.last() {
            Some(c) => c.accumulated.clone(),
            None => CrsPowers::generator(self.backend, self.degree),
        }
    }

    /// Verifies every link, returning one report per contribution.
    pub fn reports(&self) -> Vec<ContributionReport> {
        let mut prev = CrsPowers::generator(self.backend, self.degree);
        let mut out = Vec::with_capacity(self.contributions.len());
        for (k, c) in self.contributions.iter().enumerate() {
            let mut report = verify_contribution(&prev, c);
            if c.participant != k {
                report.failures.push(CheckFailure {
                    check: Check::Structure,
                    subject: Subject::Own,
                    index: None,
                });
            }
            out.push(report);
            prev = c.accumulated.clone();
        }
        out
    }

    pub fn verify(&self) -> Result<(), TranscriptFailure> {
        for (k, report) in self.reports().into_iter().enumerate() {
            if !report.passed() {
                return Err(TranscriptFailure {
                    contribution: k,
                    failures: report.failures,
                });
            }
        }
        Ok(())
    }

    /// Appends a fresh contribution with newly sampled secrets.
    pub fn contribute<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<&Contribution, CeremonyError> {
        let c = contribute(self, rng)?;
        self.contributions.push(c);
        Ok(self.contributions.last().unwrap())
    }

    /// Final accumulated powers of a verified, non-empty transcript.
    pub fn final_powers(&self) -> Result<CrsPowers, CeremonyError> {
        self.verify().map_err(CeremonyError::UnverifiedTranscript)?;
        self.contributions
            .last()
            .map(|c| c.accumulated.clone())
            .ok_or(CeremonyError::EmptyTranscript)
    }

    pub fn to_json(&self) -> String {
        let doc = TranscriptDoc {
            backend: self.backend.id().to_string(),
            contributions: self
                .contributions
                .iter()
                .map(|c| ContributionDoc {
                    accumulated: PowersDoc::from(&c.accumulated),
                    own: PowersDoc::from(&c.own),
                    participant: c.participant,
                })
                .collect(),
            degree: self.degree,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("transcript serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CeremonyError> {
        let doc: TranscriptDoc = serde_json::from_str(s).map_err(CodecError::from)?;
        let id = doc.backend.parse().map_err(CodecError::from)?;
        let backend = Backend::from_id(id).map_err(CodecError::from)?;
        let contributions = doc
            .contributions
            .iter()
            .map(|c| {
                Ok(Contribution {
                    participant: c.participant,
                    accumulated: c.accumulated.parse(&backend)?,
                    own: c.own.parse(&backend)?,
                })
            })
            .collect::<Result<_, CodecError>>()?;
        Ok(CeremonyTranscript {
            backend,
            degree: doc.degree,
            contributions,
        })
    }
}

fn contribute_secrets(
    prev: &CeremonyTranscript,
    s: FieldElement,
    alpha: FieldElement,
) -> Result<Contribution, CeremonyError> {
    prev.verify()
        .map_err(CeremonyError::InvalidPriorTranscript)?;
    let base = prev.latest();
    let own = CrsPowers::from_secrets(prev.backend, prev.degree, s, alpha);
    let mut si = prev.backend.scalar_field().one();
    let mut powers = Vec::with_capacity(prev.degree + 1);
    let mut alpha_powers = Vec::with_capacity(prev.degree + 1);
    for i in 0..=prev.degree {
        powers.push(base.powers[i].scale(si));
        alpha_powers.push(base.alpha_powers[i].scale(alpha * si));
        si *= s;
    }
    Ok(Contribution {
        participant: prev.contributions.len(),
        accumulated: CrsPowers {
            powers,
            alpha: base.alpha.scale(alpha),
            alpha_powers,
        },
        own,
    })
}

/// Samples `(s_P, alpha_P)` and layers them onto the latest accumulation.
/// The secrets are dropped before returning.
pub fn contribute<R: Rng + ?Sized>(
    prev: &CeremonyTranscript,
    rng: &mut R,
) -> Result<Contribution, CeremonyError> {
    let f = prev.backend.scalar_field();
    contribute_secrets(prev, f.random_nonzero(rng), f.random_nonzero(rng))
}

#[cfg(feature = "test-hooks")]
pub fn contribute_with_secrets(
    prev: &CeremonyTranscript,
    s: FieldElement,
    alpha: FieldElement,
) -> Result<Contribution, CeremonyError> {
    contribute_secrets(prev, s, alpha)
}

/// Turns a verified transcript into a polynomial-knowledge reference string
/// for target `t`, computing `g^t(s)` from the accumulated powers.
pub fn finalize(t: &Polynomial, transcript: &CeremonyTranscript) -> Result<PolyCrs, CeremonyError> {
    let fin = transcript.final_powers()?;
    Ok(PolyCrs::from_powers(
        t,
        fin.powers,
        fin.alpha_powers,
        fin.alpha,
    )?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranscriptDoc {
    backend: String,
    contributions: Vec<ContributionDoc>,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContributionDoc {
    accumulated: PowersDoc,
    own: PowersDoc,
    participant: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct PowersDoc {
    alpha: String,
    alpha_powers: Vec<String>,
    powers: Vec<String>,
}

impl From<&CrsPowers> for PowersDoc {
    fn from(p: &CrsPowers) -> Self {
        PowersDoc {
            alpha: p.alpha.to_tagged_hex(),
            alpha_powers: hex_list(&p.alpha_powers),
            powers: hex_list(&p.powers),
        }
    }
}

impl PowersDoc {
    fn parse(&self, backend: &Backend) -> Result<CrsPowers, CodecError> {
        Ok(CrsPowers {
            powers: parse_list(backend, &self.powers)?,
            alpha: backend.parse_element(&self.alpha)?,
            alpha_powers: parse_list(backend, &self.alpha_powers)?,
        })
    }
}
