use std::collections::BTreeMap;

use rand::Rng;

use super::{Matrix, OmegaIndex, UnitaryContext};
use crate::formring::Elem;
use crate::rng::SplitMix64;

/// Rings up to this order are swept over every parameter value.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 16;

/// Vector spaces up to this size have the q-reduction identity checked on
/// every pair of vectors.
const Q_PAIR_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    /// `per_tuple` random parameter choices for each index tuple.
    Sampled { seed: u64, per_tuple: usize },
}

impl SweepMode {
    /// Exhaustive for rings of order at most [`EXHAUSTIVE_ORDER_LIMIT`].
    pub fn auto(order: usize, seed: u64) -> Self {
        if order <= EXHAUSTIVE_ORDER_LIMIT {
            SweepMode::Exhaustive
        } else {
            SweepMode::Sampled {
                seed,
                per_tuple: 64,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationReport {
    pub exhaustive: bool,
    /// Instances checked per relation name (`R1`…`R6`, `P`, `inverse`).
    pub checked: BTreeMap<&'static str, u64>,
    pub failed: BTreeMap<&'static str, u64>,
    /// The first few failing instances.
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn total_failures(&self) -> u64 {
        self.failed.values().sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }
}

const KEPT_FAILURES: usize = 32;

struct Sweep<'a> {
    ctx: &'a UnitaryContext,
    mode: SweepMode,
    rng: SplitMix64,
    report: RelationReport,
}

impl Sweep<'_> {
    fn record(&mut self, relation: &'static str, ok: bool, instance: impl FnOnce() -> String) {
        *self.report.checked.entry(relation).or_default() += 1;
        if !ok {
            *self.report.failed.entry(relation).or_default() += 1;
            if self.report.failures.len() < KEPT_FAILURES {
                self.report.failures.push(RelationFailure {
                    relation,
                    instance: instance(),
                });
            }
        }
    }

    /// Parameter tuples drawn from `pools`: the full product, or samples.
    fn tuples(&mut self, pools: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        if pools.iter().any(|p| p.is_empty()) {
            return Vec::new();
        }
        match self.mode {
            SweepMode::Exhaustive => {
                let mut out = vec![Vec::new()];
                for pool in pools {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            pool.iter().map(move |&x| {
                                let mut t = t.clone();
                                t.push(x);
                                t
                            })
                        })
                        .collect();
                }
                out
            }
            SweepMode::Sampled { per_tuple, .. } => (0..per_tuple)
                .map(|_| {
                    pools
                        .iter()
                        .map(|p| p[self.rng.random_range(0..p.len())])
                        .collect()
                })
                .collect(),
        }
    }

    fn commutator(&mut self, a: &Matrix, b: &Matrix) -> Matrix {
        let ctx = self.ctx;
        let (ai, bi) = (ctx.entry_law_inverse(a), ctx.entry_law_inverse(b));
        for (m, mi) in [(a, &ai), (b, &bi)] {
            let ok = ctx.is_identity(&ctx.mul(m, mi));
            self.record("inverse", ok, || format!("{m}"));
        }
        ctx.product(&[a, b, &ai, &bi])
    }
}

impl UnitaryContext {
    /// Checks the relations R1–R6 and the identity
    /// `P_ij = T_ij(1) T_ji(-1) T_ij(1)` for every admissible index tuple.
    pub fn verify_relations(&self, mode: SweepMode) -> RelationReport {
        let seed = match mode {
            SweepMode::Sampled { seed, .. } => seed,
            SweepMode::Exhaustive => 0,
        };
        let mut sw = Sweep {
            ctx: self,
            mode,
            rng: SplitMix64::new(seed),
            report: RelationReport {
                exhaustive: mode == SweepMode::Exhaustive,
                ..Default::default()
            },
        };
        let ring = self.ring();
        let all: Vec<Elem> = ring.elements().collect();
        let idx: Vec<OmegaIndex> = self.indices().collect();
        let short = |i: OmegaIndex, j: OmegaIndex| i.value().abs() != j.value().abs();
        let adm = |i: OmegaIndex| self.long_root_values(i).to_vec();
        let t = |i, j, x| self.t_short(i, j, x).expect("admissible short root");
        let tl = |i, a| self.t_long_unchecked(i, a);

        for &i in &idx {
            for &j in &idx {
                if !short(i, j) {
                    continue;
                }
                for v in sw.tuples(std::slice::from_ref(&all)) {
                    let x = v[0];
                    let rhs_param = ring.neg(ring.mul(self.lambda_between(i, j), ring.conj(x)));
                    let ok = t(i, j, x) == t(j.neg(), i.neg(), rhs_param);
                    sw.record("R1", ok, || format!("i={i} j={j} ξ={x}"));
                }
                for v in sw.tuples(&[all.clone(), all.clone()]) {
                    let (x, z) = (v[0], v[1]);
                    let ok = self.mul(&t(i, j, x), &t(i, j, z)) == t(i, j, ring.add(x, z));
                    sw.record("R2", ok, || format!("i={i} j={j} ξ={x} ζ={z}"));
                }
                let ok = self.p_matrix(i, j).ok() == self.p_product(i, j).ok();
                sw.record("P", ok, || format!("i={i} j={j}"));
            }
            for v in sw.tuples(&[adm(i)]) {
                let a = v[0];
                let rhs = ring.neg(ring.mul(self.lambda_between(i, i.neg()), ring.conj(a)));
                sw.record("R1", tl(i, a) == tl(i, rhs), || format!("i={i} α={a}"));
            }
            for v in sw.tuples(&[adm(i), adm(i)]) {
                let (a, b) = (v[0], v[1]);
                let ok = self.mul(&tl(i, a), &tl(i, b)) == tl(i, ring.add(a, b));
                sw.record("R2", ok, || format!("i={i} α={a} β={b}"));
            }
        }

        // R3 over all pairs of roots, short or long
        let pool = |i: OmegaIndex, j: OmegaIndex| {
            if i == j.neg() {
                adm(i)
            } else {
                all.clone()
            }
        };
        let root = |i: OmegaIndex, j: OmegaIndex, x| if i == j.neg() { tl(i, x) } else { t(i, j, x) };
        for &i in &idx {
            for &j in &idx {
                if i == j {
                    continue;
                }
                for &h in &idx {
                    for &k in &idx {
                        if h == k || h == j || h == i.neg() || k == i || k == j.neg() {
                            continue;
                        }
                        for v in sw.tuples(&[pool(i, j), pool(h, k)]) {
                            let (a, b) = (root(i, j, v[0]), root(h, k, v[1]));
                            let c = sw.commutator(&a, &b);
                            let ok = self.is_identity(&c);
                            sw.record("R3", ok, || {
                                format!("i={i} j={j} h={h} k={k} ξ={} ζ={}", v[0], v[1])
                            });
                        }
                    }
                }
            }
        }

        for &i in &idx {
            for &j in &idx {
                if !short(i, j) {
                    continue;
                }
                for &h in &idx {
                    if !short(h, j) || !short(i, h) {
                        continue;
                    }
                    for v in sw.tuples(&[all.clone(), all.clone()]) {
                        let (x, z) = (v[0], v[1]);
                        let c = sw.commutator(&t(i, j, x), &t(j, h, z));
                        let ok = c == t(i, h, ring.mul(x, z));
                        sw.record("R4", ok, || format!("i={i} j={j} h={h} ξ={x} ζ={z}"));
                    }
                }
                for v in sw.tuples(&[all.clone(), all.clone()]) {
                    let (x, z) = (v[0], v[1]);
                    let c = sw.commutator(&t(i, j, x), &t(j, i.neg(), z));
                    let lam = self.form_ring().lambda_pow(-i.eps());
                    let tail = ring.product(&[lam, ring.conj(z), ring.conj(x)]);
                    let ok = c == tl(i, ring.sub(ring.mul(x, z), tail));
                    sw.record("R5", ok, || format!("i={i} j={j} ξ={x} ζ={z}"));
                }
                for v in sw.tuples(&[adm(i), all.clone()]) {
                    let (a, x) = (v[0], v[1]);
                    let c = sw.commutator(&tl(i, a), &t(i.neg(), j, x));
                    let lam = self.lambda_between(i.neg(), j);
                    let inner = ring.product(&[ring.conj(x), a, x]);
                    let rhs = self.mul(
                        &t(i, j, ring.mul(a, x)),
                        &tl(j.neg(), ring.neg(ring.mul(lam, inner))),
                    );
                    sw.record("R6", c == rhs, || format!("i={i} j={j} α={a} ξ={x}"));
                }
            }
        }
        sw.report
    }

    /// Checks `q(u + v) = q(u) + q(v) + h(u, v)` modulo `Λ`, over every pair
    /// of vectors when `|V| ≤ 10⁴` and over `samples` random pairs otherwise.
    pub fn verify_q_reduction(&self, seed: u64, samples: usize) -> QReductionReport {
        let ring = self.ring();
        let d = self.dim();
        let lp = self.form_ring().form_parameter();
        let order = ring.order();
        let space = order.checked_pow(d as u32).filter(|&s| s <= Q_PAIR_LIMIT);
        let vector = |mut code: usize| -> Vec<Elem> {
            (0..d)
                .map(|_| {
                    let x = (code % order) as Elem;
                    code /= order;
                    x
                })
                .collect()
        };
        let mut report = QReductionReport {
            exhaustive: space.is_some(),
            ..Default::default()
        };
        let mut check = |u: &[Elem], v: &[Elem]| {
            let s: Vec<Elem> = u.iter().zip(v).map(|(&a, &b)| ring.add(a, b)).collect();
            let q = |w: &[Elem]| self.length(w).expect("vector length");
            let rhs = ring.add(ring.add(q(u), q(v)), self.form_h(u, v).expect("vector length"));
            report.checked += 1;
            if !lp.contains(ring.sub(q(&s), rhs)) && report.failures.len() < KEPT_FAILURES {
                report.failures.push((u.to_vec(), v.to_vec()));
            }
        };
        match space {
            Some(size) => {
                let vs: Vec<Vec<Elem>> = (0..size).map(vector).collect();
                for u in &vs {
                    for v in &vs {
                        check(u, v);
                    }
                }
            }
            None => {
                let mut rng = SplitMix64::new(seed);
                for _ in 0..samples {
                    let u: Vec<Elem> = (0..d).map(|_| rng.random_range(0..order) as Elem).collect();
                    let v: Vec<Elem> = (0..d).map(|_| rng.random_range(0..order) as Elem).collect();
                    check(&u, &v);
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QReductionReport {
    pub exhaustive: bool,
    pub checked: u64,
    pub failures: Vec<(Vec<Elem>, Vec<Elem>)>,
}
