use std::collections::HashSet;
use std::sync::Arc;

use indexmap::IndexSet;

use super::{closure_keys, FiniteSubgroup, GroupError};
use crate::formring::Elem;
use crate::unitary::{Matrix, UnitaryContext};

/// Largest `|R|^{2n}` for which columns are enumerated.
pub const VECTOR_LIMIT: u128 = 1_000_000;

const TABLE_LIMIT: usize = 8192;

/// All of `U_2n(R, Λ)` by column backtracking, with a generating set that
/// starts from the elementary root elements.
///
/// A column is a candidate when its length lies in `Λ`; a partial matrix
/// survives when its columns reproduce the Gram values of `h` on the basis.
pub fn enumerate_u(ctx: &Arc<UnitaryContext>, cap: usize) -> Result<FiniteSubgroup, GroupError> {
    let ring = ctx.ring();
    let d = ctx.dim();
    let order = ring.order();
    let size = (order as u128).pow(d as u32);
    if size > VECTOR_LIMIT {
        return Err(GroupError::Infeasible { size });
    }
    let bound = order_lower_bound(ctx)?;
    if bound > cap as u128 {
        return Err(GroupError::OrderAboveCap { cap, bound });
    }
    let lp = ctx.form_ring().form_parameter();
    let zero = ring.zero();

    let mut cands: Vec<Vec<Elem>> = Vec::new();
    let mut v = vec![zero; d];
    loop {
        if lp.contains(ctx.length(&v)?) && ctx.form_h(&v, &v)? == zero {
            cands.push(v.clone());
        }
        if !odometer(&mut v, order) {
            break;
        }
    }
    let c = cands.len();
    let table: Option<Vec<Elem>> = (c <= TABLE_LIMIT).then(|| {
        let mut t = vec![zero; c * c];
        for (a, va) in cands.iter().enumerate() {
            for (b, vb) in cands.iter().enumerate() {
                t[a * c + b] = ctx.form_h(va, vb).expect("vector length");
            }
        }
        t
    });
    let h = |a: usize, b: usize| -> Elem {
        match &table {
            Some(t) => t[a * c + b],
            None => ctx.form_h(&cands[a], &cands[b]).expect("vector length"),
        }
    };
    let basis: Vec<Vec<Elem>> = (0..d)
        .map(|p| (0..d).map(|q| if p == q { ring.one() } else { zero }).collect())
        .collect();
    let gram: Vec<Vec<Elem>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| ctx.form_h(x, y).expect("basis")).collect())
        .collect();

    let mut elements: IndexSet<Key> = IndexSet::new();
    let mut chosen = vec![0usize; d];
    let mut next = vec![0usize; d];
    let mut level = 0usize;
    loop {
        let mut found = false;
        while next[level] < c {
            let v = next[level];
            next[level] += 1;
            if (0..level).all(|a| h(chosen[a], v) == gram[a][level] && h(v, chosen[a]) == gram[level][a]) {
                chosen[level] = v;
                found = true;
                break;
            }
        }
        if !found {
            if level == 0 {
                break;
            }
            next[level] = 0;
            level -= 1;
            continue;
        }
        if level + 1 == d {
            let m = Matrix::from_fn(d, |r, col| cands[chosen[col]][r]);
            elements.insert(ctx.key(&m));
            if elements.len() > cap {
                return Err(GroupError::CapExceeded {
                    cap,
                    reached: elements.len(),
                    frontier: 0,
                });
            }
        } else {
            level += 1;
        }
    }

    let whole = FiniteSubgroup {
        ctx: ctx.clone(),
        generators: Vec::new(),
        elements: Arc::new(elements),
    };
    let eu: Vec<Key> = ctx.elementary_roots().iter().map(|(_, m)| ctx.key(m)).collect();
    let mut sub = closure_keys(ctx, &eu, cap, Some(&whole))?;
    let mut k = 0;
    while sub.order() < whole.order() {
        while sub.contains_key(whole.key_at(k)) {
            k += 1;
        }
        let g = whole.key_at(k).clone();
        sub.extend(&[g], cap, Some(&whole))?;
    }
    Ok(FiniteSubgroup {
        generators: sub.generators,
        ..whole
    })
}

use crate::unitary::Key;

/// A lower bound for `|U_2n(R, Λ)|`: the `EU`-orbit of `e_1` times the long
/// root elements `T_{1,-1}(α)` times the bound in rank `n - 1`, all of which
/// fix `e_1`.
pub fn order_lower_bound(ctx: &UnitaryContext) -> Result<u128, GroupError> {
    let mut bound: u128 = 1;
    for k in 1..=ctx.n() {
        let c = UnitaryContext::new(ctx.form_ring_arc().clone(), k)?;
        let first = c.index(1)?;
        let gens: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let start = c.basis_vector(first);
        let mut seen: HashSet<Vec<Elem>> = HashSet::from([start.clone()]);
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for g in &gens {
                let w = c.apply(g, &v);
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        bound = bound
            .saturating_mul(seen.len() as u128)
            .saturating_mul(c.long_root_values(first).len() as u128);
    }
    Ok(bound)
}

fn odometer(v: &mut [Elem], order: usize) -> bool {
    for x in v.iter_mut() {
        if (*x as usize) + 1 < order {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formring::{ElementSet, FiniteRing, FormRing};
    use crate::unitary::Method;

    fn ctx(m: usize, lambda: Elem, lp: &[Elem], n: usize) -> Arc<UnitaryContext> {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, lambda, lp.iter().copied().collect::<ElementSet>()).unwrap();
        Arc::new(UnitaryContext::new(Arc::new(fr), n).unwrap())
    }

    fn brute_force(c: &UnitaryContext) -> usize {
        let d = c.dim();
        let order = c.ring().order();
        let mut data = vec![0 as Elem; d * d];
        let mut count = 0;
        loop {
            let m = Matrix::new(d, data.clone()).unwrap();
            if c.is_unitary(&m, Method::Definition).unwrap_or(false) {
                count += 1;
            }
            if !odometer(&mut data, order) {
                return count;
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_in_rank_two() {
        for lp in [vec![0, 1], vec![0]] {
            let c = ctx(2, 1, &lp, 2);
            let u = enumerate_u(&c, 100_000).unwrap();
            assert_eq!(u.order(), brute_force(&c));
            assert!(u.matrices().all(|m| c.is_unitary(&m, Method::Blocks) == Ok(true)));
        }
    }

    #[test]
    fn rank_one_over_z4() {
        for (lam, lp) in [(1, vec![0, 2]), (3, vec![0, 1, 2, 3]), (3, vec![0, 2])] {
            let c = ctx(4, lam, &lp, 1);
            assert_eq!(enumerate_u(&c, 100_000).unwrap().order(), brute_force(&c));
        }
    }

    #[test]
    fn generators_generate() {
        let c = ctx(2, 1, &[0], 2);
        let u = enumerate_u(&c, 100_000).unwrap();
        let again = super::super::closure(&c, &u.generators(), 100_000).unwrap();
        assert!(again.same_elements(&u));
    }

    #[test]
    fn lower_bound_is_below_the_order() {
        for (m, lam, lp, n) in [(2, 1, vec![0, 1], 2), (2, 1, vec![0], 3), (4, 1, vec![0, 2], 1), (3, 1, vec![0], 2)] {
            let c = ctx(m, lam, &lp, n);
            let b = order_lower_bound(&c).unwrap();
            assert!(b > 1 && b <= enumerate_u(&c, 2_000_000).unwrap().order() as u128, "{m} {lp:?} {n}: {b}");
        }
    }

    #[test]
    fn cap_and_feasibility() {
        let c = ctx(2, 1, &[0, 1], 2);
        assert!(matches!(enumerate_u(&c, 10), Err(GroupError::OrderAboveCap { cap: 10, .. })));
        assert!(matches!(enumerate_u(&c, 200), Err(GroupError::CapExceeded { cap: 200, .. })));
        let big = ctx(4, 1, &[0, 2], 8);
        assert!(matches!(enumerate_u(&big, 10), Err(GroupError::Infeasible { .. })));
    }
}
