use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use super::report::{matrix_json, set_json, Check};
use super::{Mode, SuiteConfig};
use crate::formring::{enumerate_form_parameters, FormIdeal, FormRing};
use crate::groups::{
    closure_within, commutator_subgroup, enumerate_u, in_cu_necessary, level_of, make_pivot_invertible,
    normal_closure, GroupError, Workspace,
};
use crate::localize::{
    find_noncentral_witness, base_families, maximal_ideals, supplemented_base_axioms, Localization,
    LocalizeError,
};
use crate::rng::SplitMix64;
use crate::unitary::{Key, Matrix, Method, Move, OmegaIndex, Root, SweepMode, UnitaryContext, UnitaryError};

/// Collects checks, stamping each with the time since the previous one when
/// timing is on.
pub(super) struct Recorder {
    timing: bool,
    last: Instant,
    pub(super) checks: Vec<Check>,
}

impl Recorder {
    pub(super) fn new(timing: bool) -> Self {
        Recorder {
            timing,
            last: Instant::now(),
            checks: Vec::new(),
        }
    }

    fn push(&mut self, check: Check) {
        let ms = if self.timing {
            self.last.elapsed().as_millis() as u64
        } else {
            0
        };
        self.last = Instant::now();
        self.checks.push(check.with_ms(ms));
    }
}

fn info(name: impl Into<String>, witness: Value) -> Check {
    let mut c = Check::pass(name);
    c.witness = Some(witness);
    c
}

fn fi_json(fi: &FormIdeal) -> Value {
    json!({ "ideal": set_json(fi.ideal), "gamma": set_json(fi.gamma) })
}

fn matrices(pairs: Vec<(Root, Matrix)>) -> Vec<Matrix> {
    pairs.into_iter().map(|(_, m)| m).collect()
}

fn word(ctx: &UnitaryContext, pool: &[Matrix], len: usize, rng: &mut SplitMix64) -> Matrix {
    let mut acc = ctx.identity();
    if pool.is_empty() {
        return acc;
    }
    for _ in 0..len {
        acc = ctx.mul(&acc, &pool[rng.random_range(0..pool.len())]);
    }
    acc
}

fn eu_sample(ctx: &UnitaryContext, eu: &[Matrix], rng: &mut SplitMix64) -> Matrix {
    let len = rng.random_range(1..=16);
    word(ctx, eu, len, rng)
}

/// A conjugate of a word in level roots by an elementary word.
fn rel_sample(ctx: &UnitaryContext, eu: &[Matrix], roots: &[Matrix], rng: &mut SplitMix64) -> Matrix {
    let (a, b) = (rng.random_range(1..=4), rng.random_range(0..=4));
    let inner = word(ctx, roots, a, rng);
    let outer = word(ctx, eu, b, rng);
    ctx.conjugate(&outer, &inner)
}

fn random_matrix(ctx: &UnitaryContext, rng: &mut SplitMix64) -> Matrix {
    let order = ctx.ring().order();
    Matrix::from_fn(ctx.dim(), |_, _| rng.random_range(0..order) as u8)
}

fn random_move(ctx: &UnitaryContext, rng: &mut SplitMix64) -> Move {
    let n = ctx.n();
    let d = ctx.dim();
    let order = ctx.ring().order();
    let i = OmegaIndex::at(rng.random_range(0..d), n);
    if rng.random_bool(0.5) {
        let values = ctx.long_root_values(i).to_vec();
        let y = values[rng.random_range(0..values.len())];
        Move::Long { i, y }
    } else {
        loop {
            let j = OmegaIndex::at(rng.random_range(0..d), n);
            if j.value().abs() != i.value().abs() {
                return Move::Short {
                    i,
                    j,
                    x: rng.random_range(0..order) as u8,
                };
            }
        }
    }
}

fn group_skip(name: impl Into<String>, e: &GroupError) -> Check {
    Check::skip(name, e.to_string())
}

/// `Err` carries the reason the group cannot be enumerated.
fn workspace(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>) -> Result<Workspace, String> {
    if cfg.mode == Mode::Necessary {
        return Err("necessary-condition mode: U is not enumerated".into());
    }
    Workspace::new(ctx, cfg.cap).map_err(|e| e.to_string())
}

pub(super) fn ring_axioms(cfg: &SuiteConfig, _ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = &cfg.spec.form_ring;
    let ring = fr.ring();
    let list = |v: Vec<(&'static str, String)>| json!(v.iter().map(|(a, w)| format!("{a}: {w}")).collect::<Vec<_>>());
    let rv = ring.ring_violations();
    rec.push(Check::expect("ring axioms", rv.is_empty(), || list(rv.clone())));
    let iv = ring.involution_violations();
    rec.push(Check::expect("involution axioms", iv.is_empty(), || list(iv.clone())));
    let l = fr.lambda();
    let ok = ring.is_central(l) && ring.mul(l, ring.conj(l)) == ring.one();
    rec.push(Check::expect("lambda central of norm one", ok, || json!([l])));
    let v = fr.validate();
    rec.push(Check::expect("form parameter", v.is_empty(), || {
        json!(v.iter().map(ToString::to_string).collect::<Vec<_>>())
    }));
    let c = cfg.spec.c;
    let ok = c.is_subset(ring.center()) && maximal_ideals(ring, c).is_ok();
    rec.push(Check::expect("central subring", ok, || set_json(c)));
}

pub(super) fn form_params(cfg: &SuiteConfig, _ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = &cfg.spec.form_ring;
    let ring = fr.ring();
    let l = fr.lambda();
    match enumerate_form_parameters(ring, l) {
        Ok(params) => {
            rec.push(info("form parameters", json!(params.iter().map(|p| p.to_vec()).collect::<Vec<_>>())));
            let bad: Vec<_> = params
                .iter()
                .filter(|&&p| FormRing::new(fr.ring_arc().clone(), l, p).is_err())
                .map(|p| p.to_vec())
                .collect();
            rec.push(Check::expect("enumerated parameters valid", bad.is_empty(), || json!(bad)));
            let ok = params.contains(&fr.lambda_min())
                && params.contains(&fr.lambda_max())
                && params.iter().all(|p| fr.lambda_min().is_subset(*p) && p.is_subset(fr.lambda_max()));
            rec.push(Check::expect("parameters between bounds", ok, || {
                json!({ "min": set_json(fr.lambda_min()), "max": set_json(fr.lambda_max()) })
            }));
            let lp = fr.form_parameter();
            rec.push(Check::expect("configured parameter enumerated", params.contains(&lp), || set_json(lp)));
        }
        Err(e) => rec.push(Check::fail("form parameters", json!([e.to_string()]))),
    }
    let ideals = fr.form_ideals();
    rec.push(info("form ideals", json!(ideals.iter().map(fi_json).collect::<Vec<_>>())));
    let bad: Vec<_> = ideals.iter().filter(|fi| !fr.is_form_ideal(fi)).map(fi_json).collect();
    rec.push(Check::expect("form ideals valid", bad.is_empty(), || json!(bad)));
    let ok = ideals.contains(&fr.zero_ideal()) && ideals.contains(&fr.whole());
    rec.push(Check::expect("zero and whole form ideals", ok, || json!([])));
    let bad: Vec<_> = ring
        .involution_invariant_ideals()
        .into_iter()
        .filter(|&i| match (fr.gamma_min(i), fr.gamma_max(i)) {
            (Ok(lo), Ok(hi)) => !lo.is_subset(hi),
            _ => true,
        })
        .map(|i| i.to_vec())
        .collect();
    rec.push(Check::expect("relative parameter bounds", bad.is_empty(), || json!(bad)));
    let mut bad = Vec::new();
    for fi in &ideals {
        for x in ring.elements() {
            if let Ok(g) = fr.form_ideal_defined_by(fi, x) {
                if !fr.is_form_ideal(&g) || g.is_contained_in(fi) {
                    bad.push(json!({ "level": fi_json(fi), "x": x, "defined": fi_json(&g) }));
                }
            }
        }
    }
    rec.push(Check::expect("defined form ideals", bad.is_empty(), || json!(bad)));
}

pub(super) fn relations(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let rep = ctx.verify_relations(SweepMode::auto(ctx.ring().order(), cfg.seed));
    for (&name, &count) in &rep.checked {
        let failed = rep.failed.get(name).copied().unwrap_or(0);
        rec.push(Check::expect(format!("relation {name}"), failed == 0, || {
            let inst: Vec<&str> = rep
                .failures
                .iter()
                .filter(|f| f.relation == name)
                .map(|f| f.instance.as_str())
                .collect();
            json!({ "checked": count, "failed": failed, "instances": inst })
        }));
    }
    let q = ctx.verify_q_reduction(cfg.seed, cfg.samples);
    rec.push(Check::expect("q-reduction", q.failures.is_empty(), || json!(q.failures)));
}

#[derive(Default)]
struct Agreement {
    methods: Option<Value>,
    inverse: Option<Value>,
    entries: Option<Value>,
    propagation: Option<Value>,
}

impl Agreement {
    fn visit(&mut self, ctx: &UnitaryContext, m: &Matrix) {
        if self.methods.is_none() {
            let got: Vec<_> = Method::ALL.iter().map(|&k| ctx.is_unitary(m, k)).collect();
            if got.iter().any(|r| r != &Ok(true)) {
                let desc: Vec<String> = got.iter().map(|r| format!("{r:?}")).collect();
                self.methods = Some(json!({ "matrix": matrix_json(m), "results": desc }));
            }
        }
        if self.inverse.is_none() && !ctx.is_identity(&ctx.mul(m, &ctx.block_inverse(m))) {
            self.inverse = Some(matrix_json(m));
        }
        if self.entries.is_none() && !ctx.is_identity(&ctx.mul(m, &ctx.entry_law_inverse(m))) {
            self.entries = Some(matrix_json(m));
        }
        if self.propagation.is_none() && !ctx.check_propagation(m).failures.is_empty() {
            self.propagation = Some(matrix_json(m));
        }
    }

    fn push(self, prefix: &str, rec: &mut Recorder) {
        let mut one = |what: &str, w: Option<Value>| {
            let name = format!("{prefix}: {what}");
            rec.push(match w {
                None => Check::pass(name),
                Some(w) => Check::fail(name, w),
            })
        };
        one("methods agree", self.methods);
        one("inverse block formula", self.inverse);
        one("entry law", self.entries);
        one("propagation", self.propagation);
    }
}

pub(super) fn membership_agreement(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let eu = matrices(ctx.elementary_roots());
    let mut rng = SplitMix64::new(cfg.seed);
    let mut acc = Agreement::default();
    for _ in 0..cfg.samples {
        acc.visit(ctx, &eu_sample(ctx, &eu, &mut rng));
    }
    acc.push("elementary products", rec);

    let mut witness = None;
    let mut undecided = 0u64;
    for _ in 0..cfg.samples {
        let m = random_matrix(ctx, &mut rng);
        let got: Vec<_> = Method::ALL.iter().map(|&k| ctx.is_unitary(&m, k)).collect();
        if got.iter().any(|r| r == &Err(UnitaryError::Undecidable { dim: ctx.dim(), order: ctx.ring().order() })) {
            undecided += 1;
            continue;
        }
        if witness.is_none() && got.iter().any(|r| r != &got[0]) {
            let desc: Vec<String> = got.iter().map(|r| format!("{r:?}")).collect();
            witness = Some(json!({ "matrix": matrix_json(&m), "results": desc }));
        }
    }
    rec.push(match witness {
        None if undecided == cfg.samples as u64 && undecided > 0 => {
            Check::skip("random matrices: methods agree", "invertibility undecidable")
        }
        None => Check::pass("random matrices: methods agree"),
        Some(w) => Check::fail("random matrices: methods agree", w),
    });

    if cfg.mode == Mode::Necessary {
        rec.push(Check::skip("enumerated group", "necessary-condition mode: U is not enumerated"));
        return;
    }
    match enumerate_u(ctx, cfg.cap) {
        Ok(u) => {
            rec.push(info("enumerated group: order", json!(u.order())));
            let mut acc = Agreement::default();
            for m in u.matrices() {
                acc.visit(ctx, &m);
            }
            acc.push("enumerated group", rec);
        }
        Err(e) => rec.push(group_skip("enumerated group", &e)),
    }
}

pub(super) fn congruence(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = ctx.form_ring();
    let eu = matrices(ctx.elementary_roots());
    let mut rng = SplitMix64::new(cfg.seed);
    let ideals = fr.form_ideals();
    for fi in &ideals {
        let roots = matrices(ctx.level_roots(fi.ideal, fi.gamma));
        let bad = roots.iter().find(|m| !ctx.in_principal_congruence_unchecked(m, fi));
        rec.push(Check::expect(format!("{fi}: level roots in U(I,Γ)"), bad.is_none(), || {
            matrix_json(bad.unwrap())
        }));
        let mut bad_member = None;
        let mut bad_normal = None;
        for _ in 0..cfg.samples {
            let s = rel_sample(ctx, &eu, &roots, &mut rng);
            if bad_member.is_none() && !ctx.in_principal_congruence_unchecked(&s, fi) {
                bad_member = Some(matrix_json(&s));
            }
            let g = &eu[rng.random_range(0..eu.len())];
            let c = ctx.conjugate(g, &s);
            if bad_normal.is_none() && !ctx.in_principal_congruence_unchecked(&c, fi) {
                bad_normal = Some(json!({ "sample": matrix_json(&s), "by": matrix_json(g) }));
            }
        }
        for (what, w) in [("EU(I,Γ) samples in U(I,Γ)", bad_member), ("U(I,Γ) normalized by EU (sampled)", bad_normal)] {
            let name = format!("{fi}: {what}");
            rec.push(match w {
                None => Check::pass(name),
                Some(w) => Check::fail(name, w),
            });
        }
    }
    let mut ws = match workspace(cfg, ctx) {
        Ok(ws) => ws,
        Err(reason) => {
            rec.push(Check::skip("exact congruence subgroups", reason));
            return;
        }
    };
    let u_gens: Vec<Key> = ws.u().generator_keys().to_vec();
    let u_order = ws.u().order();
    for fi in &ideals {
        let groups = (|| Ok::<_, GroupError>((ws.eu_rel(fi)?, ws.principal_congruence(fi)?, ws.cu(fi)?)))();
        let (rel, pc, cu) = match groups {
            Ok(g) => g,
            Err(e) => {
                rec.push(group_skip(format!("{fi}: exact subgroups"), &e));
                continue;
            }
        };
        let orders = || json!({ "EU(I,Γ)": rel.order(), "U(I,Γ)": pc.order(), "CU(I,Γ)": cu.order(), "U": u_order });
        let ok = rel.is_subgroup_of(&pc) && pc.is_subgroup_of(&cu);
        rec.push(Check::expect(format!("{fi}: EU(I,Γ) ⊆ U(I,Γ) ⊆ CU(I,Γ)"), ok, orders));
        let ok = u_order % cu.order() == 0 && cu.order() % pc.order() == 0 && pc.order() % rel.order() == 0;
        rec.push(Check::expect(format!("{fi}: orders divide"), ok, orders));
        let ok = pc.is_normalized_by(&u_gens) && cu.is_normalized_by(&u_gens) && rel.is_normalized_by(&u_gens);
        rec.push(Check::expect(format!("{fi}: normal in U"), ok, orders));
        for (what, h) in [("EU(I,Γ)", &rel), ("U(I,Γ)", &pc)] {
            let name = format!("{fi}: level of {what}");
            rec.push(match level_of(h) {
                Ok(l) => Check::expect(name, l.valid && l.form_ideal == *fi, || fi_json(&l.form_ideal)),
                Err(e) => Check::fail(name, json!([e.to_string()])),
            });
        }
    }
}

pub(super) fn lemma46(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = ctx.form_ring();
    let ring = ctx.ring();
    let eu = matrices(ctx.elementary_roots());
    let mut rng = SplitMix64::new(cfg.seed);
    for ideal in ring.involution_invariant_ideals() {
        if ideal.len() == 1 {
            continue;
        }
        let name = format!("ideal {ideal}: column-length congruences");
        let gamma = match fr.gamma_max(ideal) {
            Ok(g) => g,
            Err(e) => {
                rec.push(Check::fail(name, json!([e.to_string()])));
                continue;
            }
        };
        let roots = matrices(ctx.level_roots(ideal, gamma));
        let mut witness = None;
        for _ in 0..cfg.samples {
            let sigma = rel_sample(ctx, &eu, &roots, &mut rng);
            let mv = random_move(ctx, &mut rng);
            match ctx.check_lemma46(&sigma, ideal, mv) {
                Ok(rep) if rep.holds() => {}
                Ok(rep) => {
                    let cols: Vec<String> = rep
                        .checks
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| format!("{}: {} vs {}", c.column, c.length, c.expected))
                        .collect();
                    witness = Some(json!({
                        "sigma": matrix_json(&sigma),
                        "move": format!("{mv:?}"),
                        "commutator": matrix_json(&rep.commutator),
                        "columns": cols,
                    }));
                }
                Err(e) => {
                    witness = Some(json!({ "sigma": matrix_json(&sigma), "move": format!("{mv:?}"), "error": e.to_string() }))
                }
            }
            if witness.is_some() {
                break;
            }
        }
        rec.push(match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        });
    }
}

pub(super) fn commutator_formulas(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = ctx.form_ring();
    let eu = matrices(ctx.elementary_roots());
    let mut rng = SplitMix64::new(cfg.seed);
    for fi in &fr.form_ideals() {
        let roots = matrices(ctx.level_roots(fi.ideal, fi.gamma));
        let mut bad = None;
        for _ in 0..cfg.samples {
            let x = rel_sample(ctx, &eu, &roots, &mut rng);
            let g = eu_sample(ctx, &eu, &mut rng);
            let c = ctx.commutator(&g, &x);
            if !ctx.in_principal_congruence_unchecked(&c, fi) {
                bad = Some(json!({ "g": matrix_json(&g), "x": matrix_json(&x) }));
                break;
            }
        }
        let name = format!("{fi}: [EU, EU(I,Γ)] ⊆ U(I,Γ) (sampled)");
        rec.push(match bad {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        });
    }
    let mut ws = match workspace(cfg, ctx) {
        Ok(ws) => ws,
        Err(reason) => {
            rec.push(Check::skip("exact commutator formulas", reason));
            return;
        }
    };
    let u = ws.u().clone();
    let eu_group = ws.eu().clone();
    for fi in &fr.form_ideals() {
        let result = (|| {
            let rel = ws.eu_rel(fi)?;
            let cu = ws.cu(fi)?;
            let a = commutator_subgroup(&eu_group, &rel, ws.cap(), Some(&u))?;
            let b = commutator_subgroup(&cu, &eu_group, ws.cap(), Some(&u))?;
            Ok::<_, GroupError>((rel, a, b))
        })();
        match result {
            Ok((rel, a, b)) => {
                let orders = || json!({ "EU(I,Γ)": rel.order(), "[EU,EU(I,Γ)]": a.order(), "[CU(I,Γ),EU]": b.order() });
                rec.push(Check::expect(format!("{fi}: [EU, EU(I,Γ)] = EU(I,Γ)"), a.same_elements(&rel), orders));
                rec.push(Check::expect(format!("{fi}: [CU(I,Γ), EU] = EU(I,Γ)"), b.same_elements(&rel), orders));
            }
            Err(e) => rec.push(group_skip(format!("{fi}: exact commutator formulas"), &e)),
        }
    }
}

pub(super) fn sandwich(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    if cfg.mode == Mode::Necessary {
        return sandwich_necessary(cfg, ctx, rec);
    }
    let mut ws = match workspace(cfg, ctx) {
        Ok(ws) => ws,
        Err(reason) => {
            rec.push(Check::skip("sandwich", reason));
            return;
        }
    };
    let samples = match ws.sample_e_normal(cfg.seed, cfg.samples) {
        Ok(s) => s,
        Err(e) => {
            rec.push(group_skip("sandwich samples", &e));
            return;
        }
    };
    for (k, h) in samples.iter().enumerate() {
        rec.push(Check::expect(format!("sample {k}: E-normal"), ws.is_e_normal(h), || {
            json!(h.generators().iter().map(matrix_json).collect::<Vec<_>>())
        }));
        let rep = match ws.sandwich(h) {
            Ok(r) => r,
            Err(e) => {
                rec.push(group_skip(format!("sample {k}: sandwich"), &e));
                continue;
            }
        };
        rec.push(Check::expect(format!("sample {k}: sandwich"), rep.holds(), || {
            json!({
                "order": h.order(),
                "level": fi_json(&rep.level.form_ideal),
                "valid": rep.level.valid,
                "lower": rep.lower_witness.as_ref().map(matrix_json),
                "upper": rep.upper_witness.as_ref().map(matrix_json),
            })
        }));
        match ws.sandwiching_levels(h) {
            Ok(levels) => {
                let ok = levels.len() == 1 && levels[0] == rep.level.form_ideal;
                rec.push(Check::expect(format!("sample {k}: unique level"), ok, || {
                    json!(levels.iter().map(fi_json).collect::<Vec<_>>())
                }));
            }
            Err(e) => rec.push(group_skip(format!("sample {k}: unique level"), &e)),
        }
    }
    // anything between EU(I,Γ) and CU(I,Γ) is E-normal
    let mut rng = SplitMix64::new(cfg.seed ^ 0x5a5a_5a5a);
    let u = ws.u().clone();
    let ideals = ws.form_ideals();
    for fi in &ideals {
        let result = (|| {
            let rel = ws.eu_rel(fi)?;
            let cu = ws.cu(fi)?;
            let extra = cu.key_at(rng.random_range(0..cu.order())).clone();
            let mut gens = rel.generators();
            gens.push(ctx.from_key(&extra));
            let h = closure_within(ctx, &gens, ws.cap(), Some(&u))?;
            Ok::<_, GroupError>((h, extra))
        })();
        let name = format!("{fi}: intermediate subgroup is E-normal");
        match result {
            Ok((h, extra)) => rec.push(Check::expect(name, ws.is_e_normal(&h), || matrix_json(&ctx.from_key(&extra)))),
            Err(e) => rec.push(group_skip(name, &e)),
        }
    }
    let mut bad = Vec::new();
    for a in &ideals {
        for b in &ideals {
            if !a.is_contained_in(b) {
                continue;
            }
            let ok = (|| {
                Ok::<_, GroupError>(
                    ws.eu_rel(a)?.is_subgroup_of(&ws.eu_rel(b)?) && ws.cu(a)?.is_subgroup_of(&ws.cu(b)?),
                )
            })();
            if ok != Ok(true) {
                bad.push(json!({ "smaller": fi_json(a), "larger": fi_json(b) }));
            }
        }
    }
    rec.push(Check::expect("monotone in the level", bad.is_empty(), || json!(bad)));
}

/// Normal closures of sampled relative elements, with the upper bound
/// checked against elementary generators only.
fn sandwich_necessary(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = ctx.form_ring();
    let eu = matrices(ctx.elementary_roots());
    let ideals = fr.form_ideals();
    let eu_keys: Vec<Key> = eu.iter().map(|m| ctx.key(m)).collect();
    let mut rng = SplitMix64::new(cfg.seed);
    for k in 0..cfg.samples {
        let fi = ideals[rng.random_range(0..ideals.len())];
        let roots = matrices(ctx.level_roots(fi.ideal, fi.gamma));
        let seed = rel_sample(ctx, &eu, &roots, &mut rng);
        let h = match normal_closure(ctx, &[seed], &eu, cfg.cap, None) {
            Ok(h) => h,
            Err(e) => {
                rec.push(group_skip(format!("sample {k}: sandwich (necessary)"), &e));
                continue;
            }
        };
        rec.push(Check::expect(format!("sample {k}: E-normal"), h.is_normalized_by(&eu_keys), || {
            json!(h.generators().iter().map(matrix_json).collect::<Vec<_>>())
        }));
        let level = match level_of(&h) {
            Ok(l) => l,
            Err(e) => {
                rec.push(Check::fail(format!("sample {k}: sandwich (necessary)"), json!([e.to_string()])));
                continue;
            }
        };
        let lvl = level.form_ideal;
        let lower = matrices(ctx.level_roots(lvl.ideal, lvl.gamma)).into_iter().find(|m| !h.contains(m));
        let upper = h
            .generators()
            .into_iter()
            .find(|g| in_cu_necessary(ctx, g, &lvl) != Ok(true));
        let ok = level.valid && lower.is_none() && upper.is_none();
        rec.push(Check::expect(format!("sample {k}: sandwich (necessary)"), ok, || {
            json!({
                "level": fi_json(&lvl),
                "valid": level.valid,
                "lower": lower.as_ref().map(matrix_json),
                "upper": upper.as_ref().map(matrix_json),
            })
        }));
    }
}

pub(super) fn localization(cfg: &SuiteConfig, ctx: &Arc<UnitaryContext>, rec: &mut Recorder) {
    let fr = ctx.form_ring();
    let c = cfg.spec.c;
    let maxima = match maximal_ideals(ctx.ring(), c) {
        Ok(m) => m,
        Err(e) => {
            rec.push(Check::fail("maximal ideals", json!([e.to_string()])));
            return;
        }
    };
    rec.push(info("maximal ideals", json!(maxima.iter().map(|m| m.to_vec()).collect::<Vec<_>>())));
    let eu = matrices(ctx.elementary_roots());
    let eu_keys: Vec<Key> = eu.iter().map(|m| ctx.key(m)).collect();
    let ideals = fr.form_ideals();
    let mut rng = SplitMix64::new(cfg.seed);
    for m in &maxima {
        let at = format!("at {m}");
        let loc = match Localization::at(ctx.clone(), c, *m) {
            Ok(l) => l,
            Err(e) => {
                rec.push(Check::fail(format!("{at}: localized form ring"), json!([e.to_string()])));
                continue;
            }
        };
        let tgt = loc.target().clone();
        rec.push(info(
            format!("{at}: localized form ring"),
            json!({
                "order": loc.localized_ring().order(),
                "lambda": tgt.form_ring().lambda(),
                "Lambda": set_json(tgt.form_ring().form_parameter()),
            }),
        ));
        let mut bad = None;
        for _ in 0..cfg.samples {
            let g = eu_sample(ctx, &eu, &mut rng);
            if tgt.is_unitary(&loc.map_matrix(&g), Method::Entries) != Ok(true) {
                bad = Some(matrix_json(&g));
                break;
            }
        }
        rec.push(match bad {
            None => Check::pass(format!("{at}: F maps EU into U")),
            Some(w) => Check::fail(format!("{at}: F maps EU into U"), w),
        });
        let t_eu = matrices(tgt.elementary_roots());
        let t_roots: Vec<Root> = tgt.elementary_roots().into_iter().map(|(r, _)| r).collect();
        let s_set = loc.localized_ring().multiplicative_set().elements().to_vec();
        for fi in &ideals {
            let pre = format!("{at}, {fi}");
            let lvl = loc.localized_level(fi);
            rec.push(Check::expect(format!("{pre}: localized level"), tgt.form_ring().is_form_ideal(&lvl), || {
                fi_json(&lvl)
            }));
            let s0 = match loc.find_s0(fi) {
                Ok(s) => {
                    rec.push(info(format!("{pre}: s0"), json!(s)));
                    s
                }
                Err(e) => {
                    rec.push(Check::fail(format!("{pre}: s0"), json!([e.to_string()])));
                    continue;
                }
            };
            let name = format!("{pre}: s0 injectivity");
            rec.push(match loc.check_s0_injectivity(fi, s0, cfg.samples as u64, rng.random()) {
                Ok(r) => Check::expect(name, r.passed() && r.premise_hits > 0, || {
                    json!({
                        "premise_hits": r.premise_hits,
                        "failures": r.failures.iter().map(|(a, b)| json!([matrix_json(a), matrix_json(b)])).collect::<Vec<_>>(),
                    })
                }),
                Err(e) => Check::fail(name, json!([e.to_string()])),
            });
            let name = format!("{pre}: commuting square");
            rec.push(match loc.sweep_commuting_square(fi) {
                Ok(r) => Check::expect(name, r.passed(), || json!(r.failures)),
                Err(e) => Check::fail(name, json!([e.to_string()])),
            });
            let mut bad = None;
            for _ in 0..cfg.samples.min(64) {
                let sigma = eu_sample(&tgt, &t_eu, &mut rng);
                let root = t_roots[rng.random_range(0..t_roots.len())];
                let s = s_set[rng.random_range(0..s_set.len())];
                if loc.commutator_scaling_agrees(fi, &sigma, &root, s) != Ok(true) {
                    bad = Some(json!({ "sigma": matrix_json(&sigma), "root": root.to_string(), "s": s }));
                    break;
                }
            }
            let name = format!("{pre}: commutator scaling");
            rec.push(match bad {
                None => Check::pass(name),
                Some(w) => Check::fail(name, w),
            });
            let name = format!("{pre}: supplemented base");
            match base_families(&loc, fi, s0, cfg.family_cap) {
                Ok(fam) => {
                    let rep = supplemented_base_axioms(&fam.a_groups(), &fam.b_groups(), &eu_keys);
                    rec.push(Check::expect(name, rep.holds(), || json!(rep.failures)));
                }
                Err(LocalizeError::Group(e)) => rec.push(group_skip(name, &e)),
                Err(e) => rec.push(Check::fail(name, json!([e.to_string()]))),
            }
        }
        let mut stats = (0u64, 0u64);
        let mut bad = None;
        for _ in 0..cfg.samples.min(32) {
            let sigma = loc.map_matrix(&eu_sample(ctx, &eu, &mut rng));
            match make_pivot_invertible(&tgt, &sigma, &t_eu, 512) {
                Ok(p) => {
                    stats.0 += 1;
                    let ok = tgt.ring().is_unit(p.result.get(0, 0))
                        && p.result == tgt.conjugate(&p.conjugator, &sigma);
                    if !ok && bad.is_none() {
                        bad = Some(matrix_json(&sigma));
                    }
                }
                Err(_) => stats.1 += 1,
            }
        }
        let name = format!("{at}: pivot search");
        rec.push(match bad {
            None => info(name, json!({ "found": stats.0, "not_found": stats.1 })),
            Some(w) => Check::fail(name, w),
        });
    }
    for fi in &ideals {
        let name = format!("{fi}: noncentral witness");
        let mut outcome = None;
        for _ in 0..cfg.samples.min(32) {
            let g = eu_sample(ctx, &eu, &mut rng);
            match find_noncentral_witness(ctx, c, &g, fi, &eu) {
                Ok(w) => {
                    outcome = Some(info(name.clone(), json!({ "maximal_ideal": set_json(w.maximal_ideal) })));
                    break;
                }
                Err(LocalizeError::NoWitness) => {}
                Err(e) => {
                    outcome = Some(Check::fail(name.clone(), json!({ "g": matrix_json(&g), "error": e.to_string() })));
                    break;
                }
            }
        }
        rec.push(outcome.unwrap_or_else(|| Check::skip(name, "every sampled element is central modulo the level")));
    }
}
