//! Seeded end-to-end runs: the `tau` instance report and the full sweep over
//! every checked property. Reports contain no timings or hash-ordered data,
//! so a fixed seed gives byte-identical JSON.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coboundary::{complete_multipartite, CochainF2, WeightedPureComplex, COCHAIN_LIMIT};
use crate::comparison::{Comparison, Relation, R};
use crate::complex::{
    sample_generic_embedding, PlMapInstance, VerificationLog, VerifyMode, COORD_DENOMINATOR, DEFAULT_CHAIN_BUDGET,
    DEFAULT_FLAG_BUDGET,
};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_to_string, QPoint, Rational};
use crate::expander::{corradi_lower_bound, BipartiteIncidence, DEFAULT_SUBSET_BUDGET};
use crate::geometry::DEFAULT_CANDIDATE_BUDGET;
use crate::hypergraph::{extract_box, max_box_exact, MultipartiteHypergraph, DEFAULT_EXTRACT_BUDGET};
use crate::lattice::{build_subspace_lattice, projective_count, validate_lattice, GradedLattice};
use crate::pach::{
    affine_selection_suite, box_coatom_analysis, tau_workbench, theorem12_chain,
    AffineMode, BoxCoatomReport, ChainReport, TauBudget, TauReport, DEFAULT_PARTITION_CAP, DEFAULT_PARTITION_SAMPLES,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Random points in the unit box, and again on coatom images, added to the
/// candidate points in the cover sweep.
pub const SWEEP_RANDOM_POINTS: usize = 1000;
pub const EXTRACTION_INSTANCES: usize = 50;
pub const SELECTION_INSTANCES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    pub subset: u128,
    pub chain: u128,
    pub flags: u128,
    pub partition_cap: u128,
    pub partition_samples: usize,
    pub candidates: usize,
    pub extract: u64,
    /// Families per draw in sampled general-position checks.
    pub verify_samples: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            subset: DEFAULT_SUBSET_BUDGET,
            chain: DEFAULT_CHAIN_BUDGET,
            flags: DEFAULT_FLAG_BUDGET,
            partition_cap: DEFAULT_PARTITION_CAP,
            partition_samples: DEFAULT_PARTITION_SAMPLES,
            candidates: DEFAULT_CANDIDATE_BUDGET,
            extract: DEFAULT_EXTRACT_BUDGET,
            verify_samples: 2000,
        }
    }
}

impl Budgets {
    /// Multiplies every cap by `s`, rounding down and keeping each at least 1.
    /// Sample counts are left alone.
    pub fn scaled(&self, s: &Rational) -> Result<Self> {
        if s <= &Rational::zero() {
            return Err(Error::Parameter("budget scale must be positive".into()));
        }
        let f = |v: u128| -> u128 {
            (Rational::from_integer(BigInt::from(v)) * s).floor().to_integer().to_u128().unwrap_or(u128::MAX).max(1)
        };
        Ok(Budgets {
            subset: f(self.subset),
            chain: f(self.chain),
            flags: f(self.flags),
            partition_cap: f(self.partition_cap),
            partition_samples: self.partition_samples,
            candidates: f(self.candidates as u128).min(usize::MAX as u128) as usize,
            extract: f(self.extract as u128).min(u64::MAX as u128) as u64,
            verify_samples: self.verify_samples,
        })
    }

    pub fn tau(&self) -> TauBudget {
        TauBudget {
            partition_cap: self.partition_cap,
            partition_samples: self.partition_samples,
            candidate_cap: self.candidates,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Comparison>,
    pub notes: Vec<String>,
}

impl Section {
    fn new(criterion: u8, name: &str) -> Self {
        Section { criterion, name: name.into(), passed: false, checks: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, c: Comparison) {
        self.checks.push(c);
    }

    fn holds(&mut self, label: impl Into<String>, holds: bool, detail: String) {
        self.checks.push(Comparison::decided(label, detail, Relation::Eq, "true".into(), holds));
    }

    fn finish(mut self) -> Self {
        self.passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.holds);
        self
    }

    pub fn failures(&self) -> Vec<&Comparison> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub version: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub sections: Vec<Section>,
    pub passed: bool,
}

/// Report of one `tau` run: the box search, the coatom analysis of every
/// witnessed box and, when n is in range, the arithmetic chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauRun {
    pub version: String,
    pub seed: u64,
    pub d: usize,
    pub q: u32,
    pub n: usize,
    pub verification: VerificationLog,
    pub tau: TauReport,
    /// Analysis of the box in the best row.
    pub analysis: Option<BoxCoatomReport>,
    pub boxes_checked: usize,
    pub boxes_failed: Vec<usize>,
    pub chain: Option<ChainReport>,
    pub chain_note: Option<String>,
    pub passed: bool,
}

pub fn tau_run(l: &GradedLattice, d: usize, n: usize, seed: u64, mode: VerifyMode, budgets: &Budgets) -> Result<TauRun> {
    let e = sample_generic_embedding(l, d, seed, mode)?;
    let verification = e.log().clone();
    let map = PlMapInstance::with_budgets(l, e, budgets.chain, budgets.flags)?;
    let tau = tau_workbench(&map, n, seed, budgets.tau())?;
    let mut boxes_failed = Vec::new();
    let mut analysis = None;
    let mut boxes_checked = 0;
    for (i, row) in tau.rows.iter().enumerate() {
        if row.best.m == 0 {
            continue;
        }
        let r = box_coatom_analysis(&map, &row.best, budgets.subset)?;
        boxes_checked += 1;
        if !r.holds() {
            boxes_failed.push(i);
        }
        if i == tau.best_row {
            analysis = Some(r);
        }
    }
    let (chain, chain_note) = match theorem12_chain(n as u64, d as u32) {
        Ok(c) => (Some(c), None),
        Err(Error::Precondition(m)) => (None, Some(format!("chain skipped: {m}"))),
        Err(e) => return Err(e),
    };
    let passed = boxes_failed.is_empty() && chain.as_ref().is_none_or(ChainReport::all_hold);
    Ok(TauRun {
        version: VERSION.into(),
        seed,
        d,
        q: l.field_params().map_or(0, |(q, _)| q),
        n,
        verification,
        tau,
        analysis,
        boxes_checked,
        boxes_failed,
        chain,
        chain_note,
        passed,
    })
}

/// Runs every section with sub-seeds drawn in a fixed order from `seed`.
pub fn run_all(seed: u64, budgets: &Budgets) -> Result<SweepReport> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let embed_seed: u64 = master.gen();
    let point_seed: u64 = master.gen();
    let tau_seed: u64 = master.gen();
    let graph_seed: u64 = master.gen();
    let affine_seed: u64 = master.gen();

    let fano = build_subspace_lattice(3, 2)?;
    let e = sample_generic_embedding(&fano, 2, embed_seed, VerifyMode::Exhaustive)?;
    let map = PlMapInstance::with_budgets(&fano, e, budgets.chain, budgets.flags)?;

    let sections = vec![
        lattice_counts()?,
        corradi_soundness(budgets)?,
        cover_sweep(&map, point_seed, budgets)?,
        box_analysis(&map, tau_seed, budgets)?,
        arithmetic_chain()?,
        coboundary_fixtures()?,
        extraction(graph_seed, budgets)?,
        affine_baselines(affine_seed)?,
    ];
    let passed = sections.iter().all(|s| s.passed);
    Ok(SweepReport { version: VERSION.into(), seed, budgets: *budgets, sections, passed })
}

pub fn lattice_counts() -> Result<Section> {
    let mut s = Section::new(1, "lattice counts");
    for (r, q, profile) in [(3usize, 2u32, vec![1usize, 7, 7, 1]), (3, 3, vec![1, 13, 13, 1]), (2, 5, vec![1, 6, 1])] {
        let l = build_subspace_lattice(r, q)?;
        let tag = format!("L({r},{q})");
        let v = validate_lattice(&l);
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        s.holds(format!("{tag} lattice axioms"), failed.is_empty(), format!("{failed:?}"));
        s.push(Comparison::eq(format!("{tag} rank profile"), &format!("{:?}", l.rank_profile()), &format!("{profile:?}")));
        let d = r as i64 - 1;
        let (nd1, nd2) = (projective_count(q as u64, d - 1) as usize, projective_count(q as u64, d - 2) as usize);
        let g = BipartiteIncidence::from_lattice(&l);
        let degrees: Vec<usize> = l.atoms().iter().map(|&a| g.degree(a)).collect::<Result<_>>()?;
        s.holds(format!("{tag} |C_a| = N_(d-1) = {nd1} for every atom"), degrees.iter().all(|&x| x == nd1), format!("{degrees:?}"));
        let mut bad_pairs = 0;
        for (&a, &b) in l.atoms().iter().tuple_combinations() {
            let (ca, cb) = (g.coatoms_of(a)?, g.coatoms_of(b)?);
            if ca.iter().filter(|c| cb.contains(c)).count() != nd2 {
                bad_pairs += 1;
            }
        }
        s.holds(format!("{tag} |C_a ∩ C_a'| = N_(d-2) = {nd2} for distinct atoms"), bad_pairs == 0, format!("{bad_pairs} bad pairs"));
        let mut bad_joins = 0;
        for &c in l.coatoms() {
            if l.join_all(&l.atoms_below(c))? != c {
                bad_joins += 1;
            }
        }
        s.holds(format!("{tag} join of A_c is c"), bad_joins == 0, format!("{bad_joins} bad coatoms"));
    }
    Ok(s.finish())
}

pub fn corradi_soundness(budgets: &Budgets) -> Result<Section> {
    let mut s = Section::new(2, "Corrádi soundness");
    for (q, ms) in [(2u32, 7usize), (3, 6)] {
        let l = build_subspace_lattice(3, q)?;
        let g = BipartiteIncidence::from_lattice(&l);
        for m in 1..=ms {
            let rec = g.min_vertex_expansion(m, budgets.subset)?;
            let bound = corradi_lower_bound(m as u64, q as u64, 2);
            let min_gamma = Rational::from_integer(BigInt::from(rec.min_gamma));
            s.push(Comparison::le(format!("L(3,{q}) m={m}: Corrádi <= minΓ"), &R(&bound.first), &R(&min_gamma)));
            if m == 3 && q == 2 {
                s.push(Comparison::eq("Fano m=3 Corrádi", &R(&bound.first), &R(&rat(27, 5))));
                s.push(Comparison::eq("Fano m=3 minΓ", &rec.min_gamma, &6));
            }
        }
    }
    let mut tested = 0u64;
    let mut failed = Vec::new();
    for (q, d) in [(2u64, 1u32), (3, 1), (5, 1), (5, 2), (7, 2), (11, 2), (7, 3)] {
        for m in 1..=projective_count(q, d as i64) {
            tested += 1;
            if !corradi_lower_bound(m, q, d).chain_holds() {
                failed.push((m, q, d));
            }
        }
    }
    s.holds("weakening chain for every (m,q,d) with q >= 2d", failed.is_empty(), format!("{tested} tested, failures {failed:?}"));
    Ok(s.finish())
}

pub fn cover_sweep(map: &PlMapInstance<'_>, seed: u64, budgets: &Budgets) -> Result<Section> {
    let mut s = Section::new(3, "coatom cover sweep");
    let log = map.embedding().log();
    s.push(Comparison::eq("general-position mode", &log.mode, &"exhaustive".to_string()));
    s.holds("accepted draw has no offending family", true, format!("{} families tested, {} draws", log.families_tested, log.attempts));
    let g = map.incidence();
    let bound = map.dim() * g.max_degree();
    let mut points = map.coatom_candidate_points(budgets.candidates)?;
    let candidates = points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SWEEP_RANDOM_POINTS {
        points.push(QPoint(
            (0..map.dim()).map(|_| rat(rng.gen_range(0..=COORD_DENOMINATOR), COORD_DENOMINATOR)).collect(),
        ));
    }
    // coatom images are thin, so half of the random points are drawn on them
    for _ in 0..SWEEP_RANDOM_POINTS {
        let j = rng.gen_range(0..map.lattice().coatoms().len());
        let cells = map.coatom_cells(j);
        let cell = &cells[rng.gen_range(0..cells.len())];
        let weights: Vec<i64> = cell.chain.iter().map(|_| rng.gen_range(1..=1000)).collect();
        let total: i64 = weights.iter().sum();
        let mut coords = vec![Rational::zero(); map.dim()];
        for (&x, &w) in cell.chain.iter().zip(&weights) {
            for (c, v) in coords.iter_mut().zip(map.embedding().point(x).coords()) {
                *c += v * rat(w, total);
            }
        }
        points.push(QPoint(coords));
    }
    let (mut max_count, mut max_selected, mut max_sum, mut covered_points) = (0, 0, 0, 0);
    let mut invalid = Vec::new();
    for (i, u) in points.iter().enumerate() {
        let count = map.coatom_cover_count(u)?.count;
        max_count = max_count.max(count);
        if count == 0 {
            continue;
        }
        covered_points += 1;
        let cert = map.cover_certificate(u)?;
        if !cert.is_valid() {
            invalid.push(i);
        }
        max_selected = max_selected.max(cert.selected.len());
        max_sum = max_sum.max(cert.degree_sum);
    }
    s.notes.push(format!("{candidates} candidate points, {SWEEP_RANDOM_POINTS} random points in the unit box, {SWEEP_RANDOM_POINTS} on coatom images, {covered_points} covered"));
    s.push(Comparison::le("max coatom cover count <= d max|C_a|", &max_count, &bound));
    s.holds("every certificate valid", invalid.is_empty(), format!("invalid at {invalid:?}"));
    s.push(Comparison::le("max |T'| <= d", &max_selected, &map.dim()));
    s.push(Comparison::le("max Σ|C_a(η')| <= d max|C_a|", &max_sum, &bound));
    Ok(s.finish())
}

pub fn box_analysis(map: &PlMapInstance<'_>, seed: u64, budgets: &Budgets) -> Result<Section> {
    let mut s = Section::new(4, "homogeneous boxes and the expansion inequality");
    let tau = tau_workbench(map, 2, seed, budgets.tau())?;
    let rhs = rat(20, 3);
    let mut checked = 0;
    let mut failed = Vec::new();
    let mut max_gamma = 0;
    for (i, row) in tau.rows.iter().enumerate() {
        if row.best.m == 0 {
            continue;
        }
        let r = box_coatom_analysis(map, &row.best, budgets.subset)?;
        checked += 1;
        max_gamma = max_gamma.max(r.min_gamma);
        if !r.holds() || r.rhs21 != rat_to_string(&rhs) {
            failed.push(i);
        }
    }
    s.notes.push(format!("tau_hat = {} over {} partitions", tau.tau_hat, tau.rows.len()));
    s.push(Comparison::le("witnessed boxes", &1, &checked));
    s.holds("every box satisfies the two-sided count", failed.is_empty(), format!("failed rows {failed:?}"));
    s.push(Comparison::le("max minΓ(m) over boxes <= 20/3", &R(&Rational::from_integer(BigInt::from(max_gamma))), &R(&rhs)));
    Ok(s.finish())
}

pub fn arithmetic_chain() -> Result<Section> {
    let mut s = Section::new(5, "arithmetic chain");
    for (n, q, bound) in [(16u64, 7u64, "144/1"), (81, 17, "324/1"), (256, 29, "576/1")] {
        let r = theorem12_chain(n, 2)?;
        s.push(Comparison::eq(format!("n={n}: q"), &r.q, &q));
        s.push(Comparison::eq(format!("n={n}: final bound"), &r.final_bound, &bound.to_string()));
        let failed: Vec<&str> = r.comparisons.iter().filter(|c| !c.holds).map(|c| c.label.as_str()).collect();
        s.holds(format!("n={n}: all {} comparisons", r.comparisons.len()), failed.is_empty(), format!("{failed:?}"));
        if n == 16 {
            let eq = r.comparisons.iter().find(|c| c.label == "q/(q-d) <= 2");
            let operands = eq.map(|c| (c.lhs.clone(), c.rhs.clone(), c.holds));
            s.holds("n=16: 7/5 <= 2", operands == Some(("7/5".into(), "2/1".into(), true)), format!("{operands:?}"));
        }
    }
    Ok(s.finish())
}

/// `h_k` through the cosystolic-norm path: every φ is tested against every
/// shift, with no coset reduction.
fn h_direct(x: &WeightedPureComplex, k: i32) -> Result<Option<Rational>> {
    let n = x.faces(k).len();
    if n > COCHAIN_LIMIT {
        return Err(Error::capacity("direct h_k", n, COCHAIN_LIMIT));
    }
    let below = x.faces(k - 1).len();
    let boundaries: Vec<CochainF2> = (0u64..1 << below)
        .map(|bits| {
            let psi = x.cochain(k - 1, &(0..below).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>())?;
            Ok(x.coboundary(&psi))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<Rational> = None;
    for bits in 0u64..1 << n {
        let phi = x.cochain(k, &(0..n).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>())?;
        if boundaries.contains(&phi) {
            continue;
        }
        let r = x.cochain_calculus(&phi)?;
        let v = x.norm(&r.d_phi) / r.cosystolic_norm;
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
        }
    }
    Ok(best)
}

pub fn coboundary_fixtures() -> Result<Section> {
    let mut s = Section::new(6, "coboundary expansion");
    let to_tops = |v: &[&[&str]]| -> Vec<Vec<String>> { v.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect() };
    let mut fixtures: Vec<(String, WeightedPureComplex)> = vec![
        ("triangle".into(), WeightedPureComplex::build(&to_tops(&[&["0", "1", "2"]]))?),
        ("hollow triangle".into(), WeightedPureComplex::build(&to_tops(&[&["0", "1"], &["1", "2"], &["0", "2"]]))?),
    ];
    for n in 2..=4 {
        fixtures.push((format!("K_{n},{n}"), complete_multipartite(2, n)?));
    }
    fixtures.push(("V1*V2*V3, n=2".into(), complete_multipartite(3, 2)?));
    let (half, quarter) = (rat(1, 2), rat(1, 4));
    for (name, x) in &fixtures {
        let bad: Vec<i32> = (-1..=x.dim() as i32).filter(|&k| x.total_weight(k) != rat(1, 1)).collect();
        s.holds(format!("{name}: weights sum to 1 in every dimension"), bad.is_empty(), format!("{bad:?}"));
        for k in 0..x.dim() as i32 {
            let Some(h) = x.h_k(k)?.map(|e| e.value) else { continue };
            let direct = h_direct(x, k)?;
            s.push(Comparison::eq(format!("{name}: h_{k} = second implementation"), &R(&h), &R(direct.as_ref().unwrap_or(&rat(-1, 1)))));
            let betti = x.reduced_betti_f2(k);
            s.holds(format!("{name}: h_{k} = 0 iff reduced Betti_{k} > 0"), h.is_zero() == (betti > 0), format!("h = {}, Betti = {betti}", rat_to_string(&h)));
            if name.starts_with("K_") && k == 0 {
                s.push(Comparison::le(format!("{name}: 1/2 <= h_0"), &R(&half), &R(&h)));
            }
            if name.starts_with("V1") {
                s.push(Comparison::le(format!("{name}: 1/4 <= h_{k}"), &R(&quarter), &R(&h)));
            }
        }
    }
    let hollow = &fixtures[1].1;
    let h1 = hollow.h_k(1)?.map(|e| e.value);
    s.holds("hollow triangle: h_1 = 0 and Betti_1 = 1", h1 == Some(Rational::zero()) && hollow.reduced_betti_f2(1) == 1, format!("{h1:?}"));
    Ok(s.finish())
}

pub fn extraction(seed: u64, budgets: &Budgets) -> Result<Section> {
    let mut s = Section::new(7, "box extraction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut incomplete, mut exceeds, mut disagree, mut exhausted) = (Vec::new(), Vec::new(), Vec::new(), 0);
    for i in 0..EXTRACTION_INSTANCES {
        let n = 2 + i % 3;
        let (num, den) = [(1, 2), (3, 4), (9, 10)][i / 3 % 3];
        let f = MultipartiteHypergraph::random(&[n; 3], num, den, &mut rng)?;
        let exact = max_box_exact(&f)?;
        for m in 1..=n {
            let x = extract_box(&f, m, budgets.extract)?;
            if x.exhausted {
                exhausted += 1;
            }
            if let Some(parts) = &x.parts {
                if !f.is_complete_box(parts) {
                    incomplete.push((i, m));
                }
                if m > exact.m {
                    exceeds.push((i, m));
                }
            }
            if !x.exhausted && x.parts.is_some() != (m <= exact.m) {
                disagree.push((i, m));
            }
        }
    }
    s.notes.push(format!("{exhausted} extractions stopped on the node budget"));
    s.holds("every extracted box is complete", incomplete.is_empty(), format!("{incomplete:?}"));
    s.holds("no extracted box exceeds the exact maximum", exceeds.is_empty(), format!("{exceeds:?}"));
    s.holds("success at m iff m <= exact maximum", disagree.is_empty(), format!("{disagree:?}"));
    for n in 2..=4 {
        let f = MultipartiteHypergraph::complete(&[n; 3])?;
        let m = extract_box(&f, n, budgets.extract)?.parts.map_or(0, |p| p[0].len());
        s.push(Comparison::eq(format!("complete n={n}: extracted m"), &m, &n));
    }
    Ok(s.finish())
}

pub fn affine_baselines(seed: u64) -> Result<Section> {
    let mut s = Section::new(8, "affine baselines");
    let line = |v: &[i64]| -> Vec<QPoint> { v.iter().map(|&x| QPoint::from_ints(&[x])).collect() };
    let r = affine_selection_suite(&[line(&[0, 1, 2, 3]), line(&[10, 11, 12, 13])], AffineMode::Pach)?;
    s.push(Comparison::eq("d=1 interval instance: m", &r.pach_box.map_or(0, |b| b.m), &4));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mismatches, mut perturbed) = (Vec::new(), 0);
    for i in 0..SELECTION_INSTANCES {
        let size = 5 + i % 3;
        let pts: Vec<QPoint> = (0..size)
            .map(|_| QPoint::from_ints(&[rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000)]))
            .collect();
        let r = affine_selection_suite(&[pts], AffineMode::FirstSelection)?;
        if r.perturbation.is_some() {
            perturbed += 1;
        }
        if r.depth.is_none() || r.depth != r.oracle_depth {
            mismatches.push((i, r.depth, r.oracle_depth));
        }
    }
    s.notes.push(format!("{perturbed} instances perturbed into general position"));
    s.holds(format!("first-selection depth = re-count on {SELECTION_INSTANCES} instances"), mismatches.is_empty(), format!("{mismatches:?}"));
    Ok(s.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling() {
        let b = Budgets::default().scaled(&rat(1, 2)).unwrap();
        assert_eq!(b.subset, DEFAULT_SUBSET_BUDGET / 2);
        assert_eq!(b.partition_samples, DEFAULT_PARTITION_SAMPLES);
        assert!(Budgets::default().scaled(&rat(0, 1)).is_err());
        assert_eq!(Budgets::default().scaled(&rat(1, 1_000_000_000)).unwrap().extract, 1);
    }

    #[test]
    fn cheap_sections_pass() {
        for s in [lattice_counts().unwrap(), arithmetic_chain().unwrap(), affine_baselines(3).unwrap()] {
            assert!(s.passed, "{}: {:?}", s.name, s.failures());
        }
    }
}
