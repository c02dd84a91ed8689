//! The end-to-end check suite. Each check compares an expected value (a
//! published constant, an oracle result or a golden file) with what the
//! automata and linear representations produce.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::algebra::{
    minimal_polynomial, rat, recurrence_check, solve_exact, BigRat, IntPolynomial, RatMatrix,
};
use crate::automata::{
    determinize, is_language_equal, make_add, make_less_equal, minimize, project, Dfa,
    DEFAULT_STATE_CAP,
};
use crate::golden;
use crate::linrep::{
    check_closed_form, reduce, sbar_representation, scaling_identity_check, triple_representation,
    CaseFormula, LinearRepresentation,
};
use crate::oracle::{
    density_profile, factorial, factorial_residues, gamma, is_non_sum, lemma_gamma_additivity,
    lemma_quadrant_constants, scan_gaps, scan_members, three_square_test, window_residue, SetId,
};
use crate::query::{
    gap_length_set, interp::evaluate, parse, seed_registry, Compiler, PredicateRegistry,
    GAPS_QUERY, SGAPS_QUERY,
};
use crate::seed::{factauto, ThetaTriple};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Published,
    Oracle,
    Golden,
    Identity,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Published => "published",
            Source::Oracle => "oracle",
            Source::Golden => "golden",
            Source::Identity => "identity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub observed: String,
    pub source: Source,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(
        &mut self,
        criterion: u8,
        id: &str,
        ok: bool,
        expected: impl fmt::Display,
        observed: impl fmt::Display,
        source: Source,
    ) {
        self.checks.push(Check {
            criterion,
            id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            observed: observed.to_string(),
            source,
        });
    }

    fn info(
        &mut self,
        criterion: u8,
        id: &str,
        expected: impl fmt::Display,
        observed: impl fmt::Display,
    ) {
        self.checks.push(Check {
            criterion,
            id: id.to_string(),
            status: Status::Info,
            expected: expected.to_string(),
            observed: observed.to_string(),
            source: Source::Published,
        });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("criterion\tcheck\tstatus\texpected\tobserved\tsource\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                c.criterion, c.id, c.status, c.expected, c.observed, c.source
            );
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Scans to 2^16, exponents to 60.
    Quick,
    /// Scans to 2^20, exponents to 200.
    Full,
}

impl Level {
    pub fn scan_limit(self) -> u64 {
        match self {
            Level::Quick => 1 << 16,
            Level::Full => 1 << 20,
        }
    }

    pub fn k_max(self) -> u64 {
        match self {
            Level::Quick => 60,
            Level::Full => 200,
        }
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level `{s}` (quick|full)")),
        }
    }
}

/// How automaton sizes are reported: complete with the sink state, or
/// trimmed of states that cannot reach acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    Sink,
    #[default]
    Trim,
}

impl Convention {
    pub fn count(self, d: &Dfa) -> usize {
        match self {
            Convention::Sink => d.state_count(),
            Convention::Trim => d.trimmed_state_count(),
        }
    }
}

impl FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sink" => Ok(Convention::Sink),
            "trim" => Ok(Convention::Trim),
            _ => Err(format!("unknown convention `{s}` (sink|trim)")),
        }
    }
}

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn triple(v: &[BigRat]) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Solves `2^e·c0 + c1 + 2^(12m)·τ = value` at the exponents 3, 27, 51.
pub fn solve_constants(values: [&BigInt; 3]) -> Result<Vec<BigRat>> {
    let rows = (0..3)
        .map(|m| {
            vec![
                BigRat::from_integer(BigInt::from(1u8) << (3 + 24 * m)),
                rat(1),
                BigRat::from_integer(BigInt::from(1u8) << (12 * m)),
            ]
        })
        .collect();
    let a = RatMatrix::from_rows(rows)?;
    let b: Vec<BigRat> = values
        .iter()
        .map(|v| BigRat::from_integer((*v).clone()))
        .collect();
    solve_exact(&a, &b)
}

pub struct Verifier {
    pub level: Level,
    pub convention: Convention,
    pub state_cap: usize,
    /// Reference h(x); replaceable to exercise the recurrence check.
    pub h: IntPolynomial,
}

impl Verifier {
    pub fn new(level: Level) -> Self {
        Verifier {
            level,
            convention: Convention::Trim,
            state_cap: DEFAULT_STATE_CAP,
            h: golden::reference_h(),
        }
    }

    pub fn run(&self) -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        let reg = seed_registry();
        let fa = factauto();
        self.membership(&mut report, &fa);
        self.residues(&mut report);
        let (gaps, sgaps) = self.gap_automata(&reg)?;
        self.state_counts(&mut report, &fa, &gaps, &sgaps);
        self.gap_sets(&mut report, &gaps, &sgaps)?;
        let rep = sbar_representation(&reg)?;
        self.values(&mut report, &rep);
        self.closed_forms(&mut report, &rep);
        self.constants(&mut report, &rep)?;
        self.recurrences(&mut report, &reg, &rep)?;
        self.spectral(&mut report, &rep)?;
        self.scaling(&mut report, &rep);
        self.density(&mut report, &rep);
        self.lemmas(&mut report);
        self.engine(&mut report, &gaps)?;
        Ok(report)
    }

    fn membership(&self, report: &mut VerifyReport, fa: &Dfa) {
        let limit = self.level.scan_limit();
        let bad: Vec<u64> = (1..=limit)
            .filter(|&n| fa.accepts_u64(&[n]).unwrap() != is_non_sum(n))
            .take(5)
            .collect();
        report.push(
            1,
            "membership-theta",
            bad.is_empty(),
            format!("agree on 1..={limit}"),
            format!("disagreements: [{}]", join(bad)),
            Source::Oracle,
        );
        let bad: Vec<u64> = (1..=25u64)
            .filter(|&n| fa.accepts_u64(&[n]).unwrap() == three_square_test(&factorial(n)))
            .collect();
        report.push(
            1,
            "membership-factorial",
            bad.is_empty(),
            "agree on 1..=25",
            format!("disagreements: [{}]", join(bad)),
            Source::Oracle,
        );
    }

    fn residues(&self, report: &mut VerifyReport) {
        let limit = 100_000u64;
        let table = factorial_residues(limit);
        let bad: Vec<u64> = (0..=limit)
            .filter(|&n| {
                let r = table[n as usize];
                r.odd_mod8 != window_residue(n) || r.nu2 != gamma(n)
            })
            .take(5)
            .collect();
        report.push(
            2,
            "odd-part-mod-8",
            bad.is_empty(),
            format!("agree on 0..={limit}"),
            format!("disagreements: [{}]", join(bad)),
            Source::Oracle,
        );
    }

    fn compile(&self, reg: &PredicateRegistry, text: &str) -> Result<Dfa> {
        Compiler::new(reg)
            .with_state_cap(self.state_cap)
            .compile_with_order(&parse(text)?, &["n", "r"])
    }

    fn gap_automata(&self, reg: &PredicateRegistry) -> Result<(Dfa, Dfa)> {
        Ok((
            self.compile(reg, GAPS_QUERY)?,
            self.compile(reg, SGAPS_QUERY)?,
        ))
    }

    fn state_counts(&self, report: &mut VerifyReport, fa: &Dfa, gaps: &Dfa, sgaps: &Dfa) {
        let n = self.convention.count(fa);
        report.push(
            3,
            "factauto-states",
            n == golden::FACTAUTO_STATES,
            golden::FACTAUTO_STATES,
            n,
            Source::Published,
        );
        report.info(
            3,
            "gaps-states",
            golden::GAPS_STATES,
            self.convention.count(gaps),
        );
        report.info(
            3,
            "sgaps-states",
            golden::SGAPS_STATES,
            self.convention.count(sgaps),
        );
    }

    fn gap_sets(&self, report: &mut VerifyReport, gaps: &Dfa, sgaps: &Dfa) -> Result<()> {
        let sbar: BTreeSet<u64> = gap_length_set(gaps, 64)?;
        let s: BTreeSet<u64> = gap_length_set(sgaps, 64)?;
        let want_sbar: BTreeSet<u64> = golden::SBAR_GAP_LENGTHS.into_iter().collect();
        let want_s: BTreeSet<u64> = golden::S_GAP_LENGTHS.into_iter().collect();
        report.push(
            4,
            "sbar-gap-lengths",
            sbar == want_sbar,
            join(&want_sbar),
            join(&sbar),
            Source::Published,
        );
        report.push(
            4,
            "s-gap-lengths",
            s == want_s,
            join(&want_s),
            join(&s),
            Source::Published,
        );

        // the last new length appears at 153828, so scan at least 2^18
        let scan = scan_gaps(self.level.scan_limit().max(1 << 18));
        let witnessed: BTreeSet<u64> = scan.first_sbar.keys().copied().collect();
        report.push(
            4,
            "sbar-gaps-witnessed",
            witnessed == want_sbar,
            join(&want_sbar),
            join(&witnessed),
            Source::Published,
        );
        let witnessed: BTreeSet<u64> = scan.first_s.keys().copied().collect();
        report.push(
            4,
            "s-gaps-witnessed",
            witnessed == want_s,
            join(&want_s),
            join(&witnessed),
            Source::Published,
        );
        for (len, start) in golden::SBAR_FIRST_ANCHORS {
            let got = scan.first_sbar.get(&len).copied();
            report.push(
                4,
                &format!("first-gap-{len}"),
                got == Some(start),
                start,
                got.map_or("absent".into(), |g| g.to_string()),
                Source::Published,
            );
        }
        let order = scan.appearance_order(SetId::SBar);
        let want = golden::first_occurrences(SetId::SBar);
        report.push(
            4,
            "first-occurrence-order",
            order == want,
            "golden/gaps.tsv",
            if order == want {
                "identical".into()
            } else {
                format!("{order:?}")
            },
            Source::Golden,
        );
        Ok(())
    }

    fn values(&self, report: &mut VerifyReport, rep: &LinearRepresentation) {
        for (k, want) in golden::POW2_VALUES {
            let got = rep.value_pow2(k);
            report.push(
                5,
                &format!("value-2^{k}"),
                got.to_string() == want,
                want,
                got,
                Source::Published,
            );
        }
        for (k, want) in golden::THREE_POW2_VALUES {
            let got = rep.value_3pow2(k);
            report.push(
                5,
                &format!("value-3*2^{k}"),
                got.to_string() == want,
                want,
                got,
                Source::Published,
            );
        }
    }

    fn closed_forms(&self, report: &mut VerifyReport, rep: &LinearRepresentation) {
        let k_max = self.level.k_max().min(120);
        for (id, form) in [
            ("closed-form-2^k", CaseFormula::pow2()),
            ("closed-form-3*2^k", CaseFormula::three_pow2()),
        ] {
            let r = check_closed_form(rep, &form, k_max);
            let bad: Vec<u64> = r.mismatches().map(|m| m.k).collect();
            report.push(
                6,
                id,
                r.holds(),
                format!("k in {}..={k_max}", form.lower_bound),
                format!("mismatches at k = [{}]", join(bad)),
                Source::Published,
            );
        }
    }

    fn constants(&self, report: &mut VerifyReport, rep: &LinearRepresentation) -> Result<()> {
        let systems = [
            (
                "constants-2^k",
                [rep.value_pow2(3), rep.value_pow2(27), rep.value_pow2(51)],
                [rat(1) / rat(8), rat(0), rat(-1)],
            ),
            (
                "constants-3*2^k",
                [rep.value_3pow2(3), rep.value_3pow2(27), rep.value_3pow2(51)],
                [rat(3) / rat(8), rat(0), rat(-1)],
            ),
        ];
        for (id, values, want) in systems {
            let got = solve_constants([&values[0], &values[1], &values[2]])?;
            report.push(
                7,
                id,
                got == want,
                triple(&want),
                triple(&got),
                Source::Published,
            );
        }
        Ok(())
    }

    fn recurrences(
        &self,
        report: &mut VerifyReport,
        reg: &PredicateRegistry,
        rep: &LinearRepresentation,
    ) -> Result<()> {
        let k_max = self.level.k_max() as usize;
        let u = rep.pow2_sequence(k_max, &[1]);
        let r = recurrence_check(&u, &self.h, k_max)?;
        report.push(
            8,
            "recurrence-sbar",
            r.holds(),
            format!("{} relations hold", r.checked),
            format!("failures at k = [{}]", join(&r.failures)),
            Source::Published,
        );
        for t in ThetaTriple::all() {
            let u = triple_representation(reg, t)?.pow2_sequence(k_max, &[1]);
            let r = recurrence_check(&u, &self.h, k_max)?;
            report.push(
                8,
                &format!("recurrence-theta-{}", t.code()),
                r.holds(),
                format!("{} relations hold", r.checked),
                format!("failures at k = [{}]", join(&r.failures)),
                Source::Published,
            );
        }
        Ok(())
    }

    fn spectral(&self, report: &mut VerifyReport, rep: &LinearRepresentation) -> Result<()> {
        let env = golden::spectral_envelope(4);
        let ok = self.h.divides(&env)?;
        report.push(
            9,
            "h-divides-envelope",
            ok,
            "x^4(x-1)(x-2)(x^24-4096)",
            format!("h = {}", self.h),
            Source::Published,
        );
        let reduced = reduce(rep);
        let mp = minimal_polynomial(&reduced.m0_matrix())?;
        let d = mp.x_valuation();
        let ok = d <= reduced.dim() && mp.divides(&golden::spectral_envelope(d))?;
        report.push(
            9,
            "reduced-minpoly-divides-envelope",
            ok,
            format!("x^{d}(x-1)(x-2)(x^24-4096)"),
            format!("dim {}, minpoly {}", reduced.dim(), mp),
            Source::Identity,
        );
        Ok(())
    }

    fn scaling(&self, report: &mut VerifyReport, rep: &LinearRepresentation) {
        let r = scaling_identity_check(rep, 6);
        let bad: Vec<String> = r
            .failures
            .iter()
            .map(|(k, s)| format!("({k},{s})"))
            .collect();
        report.push(
            10,
            "scaling-identity",
            r.holds(),
            format!("{} pairs (k,s), k <= 6", r.checked),
            format!("fails at [{}]", bad.join(" ")),
            Source::Published,
        );
    }

    fn density(&self, report: &mut VerifyReport, rep: &LinearRepresentation) {
        let scan = scan_members(1 << 20);
        // the scan and the linear representation must agree before the scan is trusted
        let probes = [1u64 << 10, 12_345, 1 << 15, 110_500, 777_777, 1 << 20];
        let bad: Vec<u64> = probes
            .into_iter()
            .filter(|&n| rep.eval_u64(n) != BigInt::from(scan.count(n)))
            .collect();
        report.push(
            11,
            "scan-matches-linrep",
            bad.is_empty(),
            "equal counts",
            format!("differ at [{}]", join(bad)),
            Source::Identity,
        );

        let narrow = density_profile(&scan, 1 << 10, 1 << 15);
        let wide = density_profile(&scan, 1 << 10, 1 << 20);
        let ratio = wide.sup / narrow.sup;
        report.push(
            11,
            "density-growth",
            ratio <= 1.5,
            "ratio <= 1.5",
            format!("{:.6} / {:.6} = {ratio:.4}", wide.sup, narrow.sup),
            Source::Oracle,
        );
        report.push(
            11,
            "density-sign-change",
            wide.positive_seen && wide.negative_seen,
            "both signs",
            format!(
                "positive {} negative {}",
                wide.positive_seen, wide.negative_seen
            ),
            Source::Oracle,
        );
        for p in [&narrow, &wide] {
            let limit = p.table.last().map_or(0, |t| t.0);
            let Some(g) = golden::density_for(1 << 10, limit) else {
                continue;
            };
            let ok = p.sup <= g.sup() * (1.0 + 1e-12)
                && p.argmax == g.argmax
                && p.deviation_at_argmax == g.deviation;
            report.push(
                11,
                &format!("density-golden-2^{}", limit.trailing_zeros()),
                ok,
                format!("sup {:.6} at {} (dev {})", g.sup(), g.argmax, g.deviation),
                format!(
                    "sup {:.6} at {} (dev {})",
                    p.sup, p.argmax, p.deviation_at_argmax
                ),
                Source::Golden,
            );
        }
    }

    fn lemmas(&self, report: &mut VerifyReport) {
        let (k_max, t_max, s_max, odd_max) = match self.level {
            Level::Quick => (8, 31, 10, 15),
            Level::Full => (10, 63, 12, 31),
        };
        let r = lemma_gamma_additivity(k_max, t_max);
        report.push(
            12,
            "gamma-additivity",
            r.holds(),
            format!("k <= {k_max}, t <= {t_max}"),
            format!("{} cases, {} violations", r.checked, r.violations.len()),
            Source::Oracle,
        );
        let mut checked = 0;
        let mut violations = 0;
        for s in 2..=s_max {
            let (r, _) = lemma_quadrant_constants(s, odd_max);
            checked += r.checked;
            violations += r.violations.len();
        }
        report.push(
            12,
            "quadrant-constants",
            violations == 0,
            format!("s <= {s_max}, odd t <= {odd_max}"),
            format!("{checked} cases, {violations} violations"),
            Source::Oracle,
        );
    }

    fn engine(&self, report: &mut VerifyReport, gaps: &Dfa) -> Result<()> {
        let projected = minimize(&determinize(&project(&make_add(), "y")?, self.state_cap)?);
        let ok = is_language_equal(&projected, &make_less_equal())?;
        report.push(
            13,
            "project-add-is-le",
            ok,
            "equal languages",
            if ok { "equal" } else { "different" },
            Source::Identity,
        );

        let reg = PredicateRegistry::new();
        let mut c = Compiler::new(&reg).with_state_cap(self.state_cap);
        let lhs = c.compile(&parse("E y (x = y + y + 1) & (y < z)")?)?;
        let rhs = c.compile(&parse("~(A y ~((x = y + y + 1) & (y < z)))")?)?;
        let ok = is_language_equal(&lhs, &rhs)?;
        report.push(
            13,
            "quantifier-duality",
            ok,
            "equal languages",
            if ok { "equal" } else { "different" },
            Source::Identity,
        );

        let f = parse(GAPS_QUERY)?;
        let preds = |name: &str, args: &[u64]| (name == "factauto").then(|| is_non_sum(args[0]));
        let mut bad = Vec::new();
        let mut env = HashMap::new();
        for n in 0..1024u64 {
            for r in 0..1024u64 {
                env.insert("n".to_string(), n);
                env.insert("r".to_string(), r);
                if evaluate(&f, &mut env, &preds, 1024)? != gaps.accepts_u64(&[n, r])? {
                    bad.push(format!("({n},{r})"));
                }
            }
        }
        report.push(
            13,
            "compiler-vs-interpreter",
            bad.is_empty(),
            "agree on n, r < 2^10",
            format!(
                "disagreements: [{}]",
                bad.iter().take(5).cloned().collect::<Vec<_>>().join(" ")
            ),
            Source::Oracle,
        );
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_from_published_values() {
        let v = |s: &str| s.parse::<BigInt>().unwrap();
        let c = solve_constants([&v("0"), &v("16773120"), &v("281474959933440")]).unwrap();
        assert_eq!(c, vec![rat(1) / rat(8), rat(0), rat(-1)]);
    }

    #[test]
    fn tampered_h_breaks_recurrence() {
        let reg = seed_registry();
        let rep = sbar_representation(&reg).unwrap();
        let mut coeffs = golden::reference_h().coeffs().to_vec();
        coeffs[10] += 1;
        let u = rep.pow2_sequence(60, &[1]);
        assert!(recurrence_check(&u, &golden::reference_h(), 60)
            .unwrap()
            .holds());
        assert!(!recurrence_check(&u, &IntPolynomial::new(coeffs), 60)
            .unwrap()
            .holds());
    }

    #[test]
    fn parse_flags() {
        assert_eq!("quick".parse::<Level>().unwrap(), Level::Quick);
        assert_eq!("trim".parse::<Convention>().unwrap(), Convention::Trim);
        assert!("slow".parse::<Level>().is_err());
    }
}
