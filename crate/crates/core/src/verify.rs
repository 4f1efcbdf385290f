//! Consistency sweeps over a catalog: unit and associativity laws, the
//! Riedtmann count, span-versus-formula products, stalk agreement between
//! the derived and classical numbers, and the orbit-stabilizer identity.
//!
//! Every sweep returns its counterexamples rather than failing fast, and the
//! cases are evaluated in parallel but reported in basis order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::catalog::{dims_le, ClassId};
use crate::derived::{mapping_cone, try_derived_class_of, ChainHomSpace, ChainMap, DerivedClass};
use crate::error::{HallError, Result};
use crate::hall::{multiply, ClassicalContext, DerivedContext, HallAlgebra, HallElement};
use crate::hom::{automorphisms, hom_basis, kernel_cokernel};
use crate::io::{format_rational, rational_from_int, with_schema};
use crate::span::{build_span_model, mu_span, SpanModel};

/// One identity evaluated on a single configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Unit,
    Assoc,
    Riedtmann,
    Span,
    Stalk,
    Orbit,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Unit, Check::Assoc, Check::Riedtmann, Check::Span, Check::Stalk, Check::Orbit];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Unit => "unit",
            Check::Assoc => "assoc",
            Check::Riedtmann => "riedtmann",
            Check::Span => "span",
            Check::Stalk => "stalk",
            Check::Orbit => "orbit",
        }
    }

    /// Parses `"unit,assoc"` or `"all"`.
    pub fn parse_list(s: &str) -> Result<BTreeSet<Check>> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.insert(part.parse()?);
            }
        }
        Ok(out)
    }
}

impl FromStr for Check {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HallError::InvalidLf(format!("unknown check {s:?}")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const PRETTY_NOTE_LIMIT: usize = 5;

/// Outcome of one check in one mode.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckOutcome {
    pub check: String,
    pub mode: String,
    pub cases: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub extra: BTreeMap<String, Value>,
    /// First enumeration-cap overrun met while running the check.
    pub cap_overrun: Option<CapOverrun>,
}

/// The fields of a [`HallError::CapExceeded`], kept so a sweep can re-raise it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapOverrun {
    pub what: String,
    pub needed: String,
    pub cap: u64,
}

impl From<CapOverrun> for HallError {
    fn from(c: CapOverrun) -> HallError {
        HallError::CapExceeded {
            what: c.what,
            needed: c.needed,
            cap: c.cap,
        }
    }
}

impl CheckOutcome {
    fn new(check: &Check, mode: &str) -> CheckOutcome {
        CheckOutcome {
            check: check.name().into(),
            mode: mode.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, r: Result<Option<String>>) {
        self.cases += 1;
        match r {
            Ok(None) => {}
            Ok(Some(msg)) => self.failures.push(msg),
            Err(e) => {
                self.failures.push(format!("error: {e}"));
                if let (HallError::CapExceeded { what, needed, cap }, None) = (e, &self.cap_overrun) {
                    self.cap_overrun = Some(CapOverrun { what, needed, cap });
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "mode": self.mode,
            "status": if self.passed() { "pass" } else { "fail" },
            "cases": self.cases,
            "failures": self.failures,
            "notes": self.notes,
        });
        for (k, x) in &self.extra {
            v[k] = x.clone();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub context: Value,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn failure_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.failures.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.failure_count() == 0
    }

    pub fn outcome(&self, check: &str, mode: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check && o.mode == mode)
    }

    pub fn to_json(&self) -> Value {
        with_schema(json!({
            "context": self.context,
            "checks": self.outcomes.iter().map(CheckOutcome::to_json).collect::<Vec<_>>(),
            "failures": self.failure_count(),
            "status": if self.passed() { "pass" } else { "fail" },
        }))
    }

    /// One line per outcome; long note lists are truncated.
    pub fn to_pretty_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&format!(
                "{:<10} {:<10} {:>7} cases  {}\n",
                o.check,
                o.mode,
                o.cases,
                if o.passed() { "pass".to_string() } else { format!("FAIL ({})", o.failures.len()) }
            ));
            for f in &o.failures {
                out.push_str(&format!("    {f}\n"));
            }
            for n in o.notes.iter().take(PRETTY_NOTE_LIMIT) {
                out.push_str(&format!("    note: {n}\n"));
            }
            if o.notes.len() > PRETTY_NOTE_LIMIT {
                out.push_str(&format!("    ({} more notes in the JSON report)\n", o.notes.len() - PRETTY_NOTE_LIMIT));
            }
            for (k, v) in &o.extra {
                out.push_str(&format!("    {k} = {v}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} failures\n",
            if self.passed() { "pass" } else { "fail" },
            self.failure_count()
        ));
        out
    }
}

/// A triple label, its orbit report and the Hall number it should match.
type OrbitRow = (String, Result<OrbitReport>, Option<u64>);

/// Ordered index triples over `0..n` in lexicographic order, generated lazily.
fn par_triples(n: usize) -> impl IndexedParallelIterator<Item = (usize, usize, usize)> {
    (0..n * n * n).into_par_iter().map(move |t| (t / (n * n), (t / n) % n, t % n))
}

fn show<B: fmt::Display + Ord>(e: &HallElement<B>) -> String {
    e.to_string()
}

/// `χ_0 · χ_a = χ_a = χ_a · χ_0` for every basis class.
pub fn check_unit<A: HallAlgebra>(alg: &A) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Unit, &alg.label());
    let unit = alg.unit();
    let results: Vec<Result<Option<String>>> = alg
        .basis()
        .par_iter()
        .map(|a| {
            let left = alg.product(&unit, a)?;
            let right = alg.product(a, &unit)?;
            let expected = HallElement::basis(a.clone());
            Ok(if left != expected || right != expected {
                Some(format!("unit fails at {a}: 1·a = {}, a·1 = {}", show(&left), show(&right)))
            } else {
                None
            })
        })
        .collect();
    results.into_iter().for_each(|r| out.absorb(r));
    out
}

/// Whether both bracketings of `a · b · c` stay inside the universe.
pub fn triple_fits<A: HallAlgebra>(alg: &A, a: &A::Basis, b: &A::Basis, c: &A::Basis) -> Result<bool> {
    if !alg.fits(a, b) || !alg.fits(b, c) {
        return Ok(false);
    }
    let ab = alg.product(a, b)?;
    if ab.terms().any(|(z, _)| !alg.fits(z, c)) {
        return Ok(false);
    }
    let bc = alg.product(b, c)?;
    let fits = bc.terms().all(|(w, _)| alg.fits(a, w));
    Ok(fits)
}

/// `(a · b) · c = a · (b · c)` on every basis triple whose products fit.
pub fn check_assoc<A: HallAlgebra>(alg: &A) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Assoc, &alg.label());
    let basis = alg.basis();
    let results: Vec<Result<Option<String>>> = par_triples(basis.len())
        .filter_map(|(i, j, k)| {
            let (a, b, c) = (&basis[i], &basis[j], &basis[k]);
            match triple_fits(alg, a, b, c) {
                Ok(false) => None,
                Err(e) => Some(Err(e)),
                Ok(true) => Some((|| {
                    let (ea, eb, ec) = (
                        HallElement::basis(a.clone()),
                        HallElement::basis(b.clone()),
                        HallElement::basis(c.clone()),
                    );
                    let left = multiply(alg, &multiply(alg, &ea, &eb)?, &ec)?;
                    let right = multiply(alg, &ea, &multiply(alg, &eb, &ec)?)?;
                    Ok(if left != right {
                        Some(format!(
                            "associativity fails at ({a}, {b}, {c}): (ab)c = {}, a(bc) = {}",
                            show(&left),
                            show(&right)
                        ))
                    } else {
                        None
                    })
                })()),
            }
        })
        .collect();
    results.into_iter().for_each(|r| out.absorb(r));
    out
}

/// `#{0 -> x -> z -> y -> 0} = g^z_{x,y} · |Aut x| · |Aut y|` on every catalog triple.
pub fn check_riedtmann(ctx: &ClassicalContext) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Riedtmann, "classical");
    let cat = ctx.catalog();
    let ids: Vec<ClassId> = cat.ids().collect();
    let results: Vec<Result<Option<String>>> = par_triples(ids.len())
        .map(|(i, j, k)| {
            let (x, y, z) = (ids[i], ids[j], ids[k]);
            let sequences = ctx.count_exact_sequences(x, y, z)?;
            let g = ctx.hall_number(x, y, z)?;
            let expected = g * cat.aut_order(x)? * cat.aut_order(y)?;
            Ok((sequences != expected).then(|| {
                format!("riedtmann fails at x={x}, y={y}, z={z}: {sequences} sequences, g·|Aut x|·|Aut y| = {expected}")
            }))
        })
        .collect();
    results.into_iter().for_each(|r| out.absorb(r));
    out
}

/// `μ_span(χ_x, χ_y) = χ_x · χ_y` on every pair whose product fits.
pub fn check_span(ctx: &ClassicalContext, span: &SpanModel) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Span, "classical");
    let basis = ctx.basis();
    let pairs: Vec<(ClassId, ClassId)> = basis
        .iter()
        .flat_map(|&x| basis.iter().map(move |&y| (x, y)))
        .filter(|(x, y)| ctx.fits(x, y))
        .collect();
    let results: Vec<Result<Option<String>>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let via_span = mu_span(&HallElement::basis(x), &HallElement::basis(y), span)?;
            let via_formula = ctx.product(&x, &y)?;
            Ok((via_span != via_formula).then(|| {
                format!("span product differs at ({x}, {y}): {} vs {}", show(&via_span), show(&via_formula))
            }))
        })
        .collect();
    results.into_iter().for_each(|r| out.absorb(r));
    out.extra.insert("x1_components".into(), json!(span.x1.len()));
    out.extra.insert("x1_mono_components".into(), json!(span.x1_mono.len()));
    out
}

/// Derived Hall numbers of module stalks equal the classical ones.
pub fn check_stalk(ctx: &ClassicalContext, dctx: &DerivedContext) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Stalk, "derived");
    let cat = ctx.catalog();
    let ids: Vec<ClassId> = cat
        .ids()
        .filter(|&id| cat.dims(id).map(|d| dims_le(d, dctx.bound())).unwrap_or(false))
        .collect();
    if !(dctx.window().0..=dctx.window().1).contains(&0) {
        out.notes.push("degree 0 lies outside the window; no stalk triples".into());
        return out;
    }
    let results: Vec<Result<Option<String>>> = par_triples(ids.len())
        .map(|(i, j, k)| {
            let (x, y, z) = (ids[i], ids[j], ids[k]);
            let st = |id| DerivedClass::stalk(id, 0, cat);
            let derived = dctx.hall_number(&st(x), &st(y), &st(z))?;
            let classical = rational_from_int(ctx.hall_number(x, y, z)?);
            Ok((derived != classical).then(|| {
                format!(
                    "stalk mismatch at x={x}, y={y}, z={z}: derived {}, classical {}",
                    format_rational(&derived),
                    format_rational(&classical)
                )
            }))
        })
        .collect();
    results.into_iter().for_each(|r| out.absorb(r));
    out
}

/// Orbit data of `Aut(x)` acting on `[x, z]_y` by precomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// `|[x, z]_y|`.
    pub maps: u64,
    pub aut_order: u64,
    /// Stabilizer order of each orbit, orbits listed by least member.
    pub stabilizers: Vec<u64>,
    /// `Σ_orbits |Stab|^{-1}`.
    pub lhs: BigRational,
    /// `|[x, z]_y| / |Aut(x)|`.
    pub rhs: BigRational,
    /// `Σ_orbits |Stab|`, the reading with the stabilizer order not inverted.
    pub uninverted: BigRational,
}

impl OrbitReport {
    fn from_orbits(maps: u64, aut_order: u64, stabilizers: Vec<u64>) -> OrbitReport {
        let lhs = stabilizers.iter().map(|&s| BigRational::new(1.into(), s.into())).sum();
        let uninverted = stabilizers.iter().map(|&s| rational_from_int(s)).sum();
        OrbitReport {
            maps,
            aut_order,
            stabilizers,
            lhs,
            rhs: BigRational::new(maps.into(), aut_order.into()),
            uninverted,
        }
    }

    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn uninverted_equal(&self) -> bool {
        self.uninverted == self.rhs
    }

    pub fn is_free(&self) -> bool {
        self.stabilizers.iter().all(|&s| s == 1)
    }
}

/// Orbits of a group, given as index permutations, on a subset of indices.
fn orbit_stabilizers(members: &[u64], act: impl Fn(u64) -> Vec<u64>) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut out = Vec::new();
    for &m in members {
        if seen.contains(&m) {
            continue;
        }
        let images = act(m);
        let stab = images.iter().filter(|&&i| i == m).count() as u64;
        seen.extend(images);
        out.push(stab);
    }
    out
}

/// Classical case: `[x, z]_y` is the set of injections `x -> z` with cokernel `≅ y`.
pub fn orbit_stabilizer_check_classical(ctx: &ClassicalContext, x: ClassId, z: ClassId, y: ClassId) -> Result<OrbitReport> {
    let cat = ctx.catalog();
    let (rx, rz) = (cat.rep(x)?, cat.rep(z)?);
    let hb = hom_basis(rx, rz)?;
    let mut members = Vec::new();
    for (i, f) in hb.elements(cat.cap())?.enumerate() {
        if f.is_injective() && cat.classify(&kernel_cokernel(rx, rz, &f)?.cokernel)? == y {
            members.push(i as u64);
        }
    }
    let auts = automorphisms(rx, cat.cap())?;
    let stabilizers = orbit_stabilizers(&members, |m| {
        let f = hb.element(m);
        auts.iter().map(|g| hb.index_of(&f.compose(g))).collect()
    });
    Ok(OrbitReport::from_orbits(members.len() as u64, auts.len() as u64, stabilizers))
}

/// Automorphisms of `x` in the derived category, as chain maps of its projective realisation.
#[derive(Debug)]
pub struct DerivedAutomorphisms {
    pub maps: Vec<ChainMap>,
}

/// Computes `Aut_D(x)` once per class.
#[derive(Debug, Default)]
pub struct DerivedAutCache {
    cache: Mutex<HashMap<DerivedClass, Arc<DerivedAutomorphisms>>>,
}

impl DerivedAutCache {
    pub fn get(&self, dctx: &DerivedContext, x: &DerivedClass) -> Result<Arc<DerivedAutomorphisms>> {
        if let Some(a) = self.cache.lock().expect("aut cache").get(x) {
            return Ok(a.clone());
        }
        let cat = dctx.catalog();
        let px = Arc::new(x.projective_complex(cat)?);
        let end = ChainHomSpace::new(px.clone(), px)?;
        let n = end.checked_class_count(crate::hall::DEFAULT_HOM_CLASS_CAP)?;
        let mut maps = Vec::new();
        for k in 0..n {
            let g = end.representative(k);
            if try_derived_class_of(&mapping_cone(&g)?, cat)? == Some(DerivedClass::zero()) {
                maps.push(g);
            }
        }
        let a = Arc::new(DerivedAutomorphisms { maps });
        self.cache.lock().expect("aut cache").insert(x.clone(), a.clone());
        Ok(a)
    }
}

/// Derived case: `Aut_D(x)` acting on classes in `Hom_D(x, z)` whose cone is `y`.
pub fn orbit_stabilizer_check_derived(
    dctx: &DerivedContext,
    auts: &DerivedAutCache,
    x: &DerivedClass,
    z: &DerivedClass,
    y: &DerivedClass,
) -> Result<OrbitReport> {
    let cat = dctx.catalog();
    let hs = crate::derived::hom_classes(x, z, cat)?;
    let n = hs.checked_class_count(crate::hall::DEFAULT_HOM_CLASS_CAP)?;
    let mut members = Vec::new();
    for k in 0..n {
        if try_derived_class_of(&mapping_cone(&hs.representative(k))?, cat)?.as_ref() == Some(y) {
            members.push(k);
        }
    }
    let group = auts.get(dctx, x)?;
    let stabilizers = orbit_stabilizers(&members, |m| {
        let f = hs.representative(m);
        group.maps.iter().map(|g| hs.class_index(&f.compose(g))).collect()
    });
    Ok(OrbitReport::from_orbits(members.len() as u64, group.maps.len() as u64, stabilizers))
}

fn orbit_outcome(mode: &str, reports: Vec<OrbitRow>) -> CheckOutcome {
    let mut out = CheckOutcome::new(&Check::Orbit, mode);
    let mut non_free = 0u64;
    let mut uninverted_failures = 0u64;
    for (label, r, expected_orbits) in reports {
        let r = r.map(|rep| {
            if !rep.is_free() {
                non_free += 1;
            }
            if !rep.uninverted_equal() {
                uninverted_failures += 1;
                out.notes.push(format!(
                    "{label}: stabilizers {:?}; sum of 1/|Stab| = {}, sum of |Stab| = {}, |[x,z]_y|/|Aut x| = {}",
                    rep.stabilizers,
                    format_rational(&rep.lhs),
                    format_rational(&rep.uninverted),
                    format_rational(&rep.rhs)
                ));
            }
            if !rep.equal() {
                Some(format!(
                    "{label}: sum of 1/|Stab| = {} but |[x,z]_y|/|Aut x| = {}",
                    format_rational(&rep.lhs),
                    format_rational(&rep.rhs)
                ))
            } else {
                expected_orbits
                    .filter(|&g| g != rep.stabilizers.len() as u64)
                    .map(|g| format!("{label}: {} orbits for Hall number {g}", rep.stabilizers.len()))
            }
        });
        out.absorb(r);
    }
    out.extra.insert("non_free_triples".into(), json!(non_free));
    out.extra.insert("uninverted_reading_failures".into(), json!(uninverted_failures));
    out
}

/// Orbit-stabilizer identity on every classical triple with `g^z_{x,y} ≠ 0`.
/// The action on injections is free, so the orbit count is the Hall number.
pub fn check_orbit_classical(ctx: &ClassicalContext) -> CheckOutcome {
    let cat = ctx.catalog();
    let ids: Vec<ClassId> = cat.ids().collect();
    let reports: Vec<OrbitRow> = par_triples(ids.len())
        .filter_map(|(i, j, k)| {
            let (x, y, z) = (ids[i], ids[j], ids[k]);
            let label = format!("x={x}, z={z}, y={y}");
            match ctx.hall_number(x, y, z) {
                Ok(0) => None,
                Ok(g) => Some((label, orbit_stabilizer_check_classical(ctx, x, z, y), Some(g))),
                Err(e) => Some((label, Err(e), None)),
            }
        })
        .collect();
    orbit_outcome("classical", reports)
}

/// Orbit-stabilizer identity on every derived triple `(x, z, y)` in the
/// universe with nonzero Hall number, evaluated with `Aut_D(x)` acting on
/// chain-map classes; also cross-checks `|Aut_D(x)|` against the cone census.
pub fn check_orbit_derived(dctx: &DerivedContext) -> CheckOutcome {
    let uni = dctx.universe();
    let auts = DerivedAutCache::default();
    let pairs: Vec<(usize, usize)> = (0..uni.len()).flat_map(|i| (0..uni.len()).map(move |k| (i, k))).collect::<Vec<_>>();
    let per_pair: Vec<Vec<OrbitRow>> = pairs
        .par_iter()
        .map(|&(i, k)| {
            let (x, z) = (&uni[i], &uni[k]);
            let census = match dctx.cone_census(x, z) {
                Ok(c) => c,
                Err(e) => return vec![(format!("x={x}, z={z}"), Err(e), None)],
            };
            census
                .counts
                .keys()
                .filter(|y| dctx.contains(y))
                .map(|y| {
                    let label = format!("x={x}, z={z}, y={y}");
                    (label, orbit_stabilizer_check_derived(dctx, &auts, x, z, y), None)
                })
                .collect()
        })
        .collect();
    let mut out = orbit_outcome("derived", per_pair.into_iter().flatten().collect());
    let aut_mismatch: Vec<String> = uni
        .par_iter()
        .map(|x| -> Result<Option<String>> {
            let census = dctx.aut_order(x)?;
            let direct = auts.get(dctx, x)?.maps.len() as u64;
            Ok((census != direct).then(|| format!("|Aut_D({x})|: cone census {census}, endomorphisms {direct}")))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .filter_map(|r| match r {
            Ok(m) => m,
            Err(e) => Some(format!("error: {e}")),
        })
        .collect();
    out.failures.extend(aut_mismatch);
    out
}

/// Which checks to run and on which contexts.
pub struct SuiteInput<'a> {
    pub classical: &'a ClassicalContext,
    pub derived: Option<&'a DerivedContext>,
    pub checks: BTreeSet<Check>,
}

/// Runs the selected checks and collects a deterministic report.
pub fn verify_suite(input: &SuiteInput<'_>) -> Result<VerifyReport> {
    let ctx = input.classical;
    let cat = ctx.catalog();
    let mut outcomes = Vec::new();
    let derived_ctx = |_: &Check| input.derived;
    for check in &input.checks {
        match check {
            Check::Unit => {
                outcomes.push(check_unit(ctx));
                if let Some(d) = derived_ctx(check) {
                    outcomes.push(check_unit(d));
                }
            }
            Check::Assoc => {
                outcomes.push(check_assoc(ctx));
                if let Some(d) = derived_ctx(check) {
                    outcomes.push(check_assoc(d));
                }
            }
            Check::Riedtmann => outcomes.push(check_riedtmann(ctx)),
            Check::Span => {
                let span = build_span_model(ctx)?;
                outcomes.push(check_span(ctx, &span));
            }
            Check::Stalk => {
                if let Some(d) = derived_ctx(check) {
                    outcomes.push(check_stalk(ctx, d));
                }
            }
            Check::Orbit => {
                outcomes.push(check_orbit_classical(ctx));
                if let Some(d) = derived_ctx(check) {
                    outcomes.push(check_orbit_derived(d));
                }
            }
        }
    }
    if let Some(c) = outcomes.iter().find_map(|o| o.cap_overrun.clone()) {
        return Err(c.into());
    }
    let mut context = json!({
        "quiver": serde_json::from_str::<Value>(&cat.quiver().to_json())?,
        "modulus": cat.modulus(),
        "bound": cat.bound(),
        "classes": cat.len(),
        "derived": Value::Null,
    });
    if let Some(d) = input.derived {
        context["derived"] = json!({
            "window": [d.window().0, d.window().1],
            "bound": d.bound(),
            "classes": d.universe().len(),
        });
    }
    Ok(VerifyReport { context, outcomes })
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HallError::InvalidLf(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// A Hall algebra with one structure constant replaced, for exercising the checks.
pub struct CorruptedTable<'a, A: HallAlgebra> {
    pub inner: &'a A,
    pub at: (A::Basis, A::Basis),
    pub replacement: HallElement<A::Basis>,
}

impl<A: HallAlgebra> HallAlgebra for CorruptedTable<'_, A> {
    type Basis = A::Basis;

    fn basis(&self) -> Vec<A::Basis> {
        self.inner.basis()
    }

    fn unit(&self) -> A::Basis {
        self.inner.unit()
    }

    fn fits(&self, x: &A::Basis, y: &A::Basis) -> bool {
        self.inner.fits(x, y)
    }

    fn product(&self, x: &A::Basis, y: &A::Basis) -> Result<HallElement<A::Basis>> {
        if (x, y) == (&self.at.0, &self.at.1) {
            Ok(self.replacement.clone())
        } else {
            self.inner.product(x, y)
        }
    }

    fn label(&self) -> String {
        format!("{} (corrupted)", self.inner.label())
    }
}
