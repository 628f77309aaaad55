//! Slow reference constructions used to cross-check the main algorithms.
//! Nothing outside tests and the `verify` harness calls into this module.

use std::collections::HashSet;

use crate::exact::matrix::Vector;
use crate::exact::{FlagFiltration, Matrix, Scalar, Subspace};
use crate::filtration::NilpotentOp;

/// Jordan chains `x, Nx, …, N^{m−1}x` covering the space, longest first.
pub fn jordan_chains(n: &NilpotentOp) -> Vec<Vec<Vector>> {
    let dim = n.dim();
    let nu = n.nilpotency_index();
    let kers: Vec<Subspace> = (0..=nu + 1).map(|k| Subspace::kernel(&n.pow(k))).collect();
    let mut chains = Vec::new();
    for k in (1..=nu).rev() {
        let covered = kers[k - 1].sum(&kers[k + 1].map(n.matrix()));
        for top in covered.intersect(&kers[k]).complement_in(&kers[k]) {
            let mut chain = vec![top];
            for _ in 1..k {
                let next = n.matrix().apply(chain.last().unwrap());
                chain.push(next);
            }
            chains.push(chain);
        }
    }
    let all: Vec<Vector> = chains.iter().flatten().cloned().collect();
    assert_eq!(Subspace::span(dim, &all).dim(), dim, "Jordan chains must span");
    assert_eq!(all.len(), dim, "Jordan chains must be independent");
    chains
}

/// Block sizes of `N`, descending.
pub fn jordan_type(n: &NilpotentOp) -> Vec<usize> {
    jordan_chains(n).iter().map(Vec::len).collect()
}

/// Weight filtration read off a Jordan basis: the `i`-th vector of a chain
/// of length `m` gets weight `w + m − 1 − 2i`.
pub fn jordan_weight_filtration(n: &NilpotentOp, w: i64) -> FlagFiltration {
    let dim = n.dim();
    let mut weighted: Vec<(i64, Vector)> = Vec::new();
    for chain in jordan_chains(n) {
        let m = chain.len() as i64;
        for (i, v) in chain.into_iter().enumerate() {
            weighted.push((w + m - 1 - 2 * i as i64, v));
        }
    }
    if weighted.is_empty() {
        return FlagFiltration::trivial(dim, w, false);
    }
    let lo = weighted.iter().map(|x| x.0).min().unwrap();
    let hi = weighted.iter().map(|x| x.0).max().unwrap();
    let steps = (lo..=hi)
        .map(|k| {
            let vs: Vec<Vector> = weighted
                .iter()
                .filter(|(wt, _)| *wt <= k)
                .map(|(_, v)| v.clone())
                .collect();
            (k, Subspace::span(dim, &vs))
        })
        .collect();
    FlagFiltration::increasing_int(dim, steps).expect("nested")
}

/// All distinct subspaces of `ℚ^dim` spanned by vectors with integer
/// entries in `[-r, r]`, including `0` and the whole space.
pub fn small_subspaces(dim: usize, r: i64) -> Vec<Subspace> {
    let mut vectors: Vec<Vector> = Vec::new();
    let width = (2 * r + 1) as usize;
    let total = width.pow(dim as u32);
    let mut lines: HashSet<Subspace> = HashSet::new();
    for code in 0..total {
        let mut c = code;
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push(Scalar::int((c % width) as i64 - r));
            c /= width;
        }
        if v.iter().all(num_traits::Zero::is_zero) {
            continue;
        }
        if lines.insert(Subspace::span(dim, &[v.clone()])) {
            vectors.push(v);
        }
    }
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut layer: Vec<Subspace> = vec![Subspace::zero(dim)];
    let mut out: Vec<Subspace> = vec![Subspace::zero(dim)];
    for _ in 0..dim {
        let mut next = Vec::new();
        for s in &layer {
            for v in &vectors {
                if s.contains(v) {
                    continue;
                }
                let t = s.sum(&Subspace::span(dim, std::slice::from_ref(v)));
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn raw_monodromy_conditions(n: &Matrix, steps: &[(i64, Subspace)], w: i64) -> bool {
    let dim = n.rows();
    let at = |k: i64| -> Subspace {
        steps
            .iter()
            .rev()
            .find(|(i, _)| *i <= k)
            .map_or_else(|| Subspace::zero(dim), |(_, s)| s.clone())
    };
    let lo = steps.first().map_or(w, |s| s.0);
    let hi = steps.last().map_or(w, |s| s.0);
    if !at(hi).is_full() {
        return false;
    }
    for k in lo..=hi + 2 {
        let img = at(k).map(n);
        if !at(k - 2).contains_subspace(&img) {
            return false;
        }
    }
    let reach = (hi - w).max(w - lo).max(0);
    for k in 1..=reach {
        let gr_up = at(w + k).dim() - at(w + k - 1).dim();
        let gr_down = at(w - k).dim() - at(w - k - 1).dim();
        if gr_up != gr_down {
            return false;
        }
        let reached = at(w + k).map(&n.pow(k as usize)).sum(&at(w - k - 1));
        if reached.dim() != at(w - k).dim() {
            return false;
        }
    }
    true
}

/// Every increasing filtration built from `candidates` with jumps in
/// `[w − dim + 1, w + dim − 1]` that satisfies the monodromy conditions.
pub fn exhaustive_monodromy_filtrations(
    n: &NilpotentOp,
    w: i64,
    candidates: &[Subspace],
) -> Vec<FlagFiltration> {
    let dim = n.dim() as i64;
    let lo = w - dim + 1;
    let hi = w + dim - 1;
    let mut found = Vec::new();
    let mut chain: Vec<(i64, Subspace)> = Vec::new();
    search(n.matrix(), lo, hi, candidates, &mut chain, &mut |steps| {
        if raw_monodromy_conditions(n.matrix(), steps, w) {
            found.push(FlagFiltration::increasing_int(n.dim(), steps.to_vec()).expect("nested"));
        }
    });
    found
}

fn search(
    n: &Matrix,
    k: i64,
    hi: i64,
    candidates: &[Subspace],
    chain: &mut Vec<(i64, Subspace)>,
    emit: &mut dyn FnMut(&[(i64, Subspace)]),
) {
    let dim = n.rows();
    if k > hi {
        emit(chain);
        return;
    }
    let prev = chain
        .last()
        .map_or_else(|| Subspace::zero(dim), |(_, s)| s.clone());
    let two_back = if chain.len() >= 2 {
        chain[chain.len() - 2].1.clone()
    } else {
        Subspace::zero(dim)
    };
    for c in candidates {
        if !c.contains_subspace(&prev) {
            continue;
        }
        if k == hi && !c.is_full() {
            continue;
        }
        if !two_back.contains_subspace(&c.map(n)) {
            continue;
        }
        chain.push((k, c.clone()));
        search(n, k + 1, hi, candidates, chain, emit);
        chain.pop();
    }
}

/// Whether some filtration built from `candidates` is a relative monodromy
/// filtration of `N` with respect to `W` (standard centering), by search.
pub fn brute_force_relative_exists(
    n: &NilpotentOp,
    w: &FlagFiltration,
    candidates: &[Subspace],
) -> bool {
    let dim = n.dim() as i64;
    let Some((wlo, whi)) = w.integer_range() else {
        return true;
    };
    let lo = wlo - dim + 1;
    let hi = whi + dim - 1;
    let mut ok = false;
    let mut chain = Vec::new();
    search(n.matrix(), lo, hi, candidates, &mut chain, &mut |steps| {
        if ok {
            return;
        }
        ok = (wlo..=whi).all(|l| {
            let q = w.graded_int(l);
            if q.dim() == 0 {
                return true;
            }
            let nq = q.induced(n.matrix(), &q).expect("N preserves W");
            let induced: Vec<(i64, Subspace)> = steps
                .iter()
                .map(|(k, s)| {
                    let vs: Vec<Vector> = s
                        .intersect(&w.at_int(l))
                        .basis()
                        .iter()
                        .map(|v| q.project(v))
                        .collect();
                    (*k, Subspace::span(q.dim(), &vs))
                })
                .collect();
            raw_monodromy_conditions(&nq, &induced, l)
        });
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::monodromy_weight_filtration;

    #[test]
    fn jordan_types() {
        let n = NilpotentOp::new(Matrix::from_ints(&[
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
        ]))
        .unwrap();
        assert_eq!(jordan_type(&n), vec![2, 2]);
        assert_eq!(
            jordan_weight_filtration(&n, 0),
            monodromy_weight_filtration(&n, 0).filtration
        );
    }

    #[test]
    fn small_subspace_counts() {
        // ℚ²: zero, whole space and the lines through small vectors
        let s = small_subspaces(2, 1);
        assert_eq!(s.len(), 1 + 4 + 1);
    }

    #[test]
    fn exhaustive_search_finds_unique_filtration() {
        let n = NilpotentOp::new(Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap();
        let found = exhaustive_monodromy_filtrations(&n, 0, &small_subspaces(2, 1));
        assert_eq!(found, vec![monodromy_weight_filtration(&n, 0).filtration]);
    }
}
