//! Dynamics of a morphism after reduction at a good prime: the functional
//! graph on P^N(F_{q^r}), periodic-point counts across field extensions,
//! and solving twisted fixed-point equations f(u) = Frob^m(u).
//!
//! Points of P^N(F_q) are indexed 0..(q^{N+1}-1)/(q-1) by their canonical
//! representative (first nonzero coordinate 1): points with leading slot i
//! form a contiguous block of size q^{N-i}, ordered base-q big-endian by the
//! free coordinates.  Graphs store successor/tail/period arrays over these
//! indices rather than materialized point lists; points are decoded on
//! demand, which keeps a graph at a few machine words per point.

use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::HomogeneousForm;
use crate::morphism::{eval_form_fq, ProjMorphism};
use crate::projective::{frobenius, FiniteField, FqElem, ProjPointF};

/// Index <-> point bijection on P^N(F_q) with the block layout above.
#[derive(Clone, Debug)]
pub struct PointCodec {
    field: FiniteField,
    dim: usize,
    count: u64,
}

impl PointCodec {
    /// Fails if the point count overflows u64.
    pub fn new(field: FiniteField, dim: usize) -> Result<Self> {
        let q = field.order() as u128;
        let mut count: u128 = 0;
        for i in 0..=dim {
            let block = q.checked_pow((dim - i) as u32).ok_or_else(too_many)?;
            count = count.checked_add(block).ok_or_else(too_many)?;
        }
        if count > u64::MAX as u128 {
            return Err(too_many());
        }
        Ok(PointCodec { field, dim, count: count as u64 })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points of P^N(F_q), i.e. (q^{N+1}-1)/(q-1).
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn decode(&self, mut idx: u64) -> ProjPointF {
        assert!(idx < self.count, "point index {} out of range", idx);
        let q = self.field.order();
        for lead in 0..=self.dim {
            let free = (self.dim - lead) as u32;
            let block = q.pow(free);
            if idx >= block {
                idx -= block;
                continue;
            }
            let mut coords = vec![self.field.zero(); self.dim + 1];
            coords[lead] = self.field.one();
            for k in 0..free as usize {
                let place = q.pow(free - 1 - k as u32);
                coords[lead + 1 + k] = self.field.elem_from_index(idx / place);
                idx %= place;
            }
            return ProjPointF::new(self.field.clone(), coords)
                .expect("codec coordinates are nonzero by construction");
        }
        unreachable!("index ranges were exhausted below count");
    }

    /// Inverse of `decode`; the point must lie over the same field.
    pub fn encode(&self, u: &ProjPointF) -> u64 {
        assert_eq!(u.dim(), self.dim, "point dimension mismatch");
        let q = self.field.order();
        let coords = u.coords();
        let lead = coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point has a nonzero coordinate");
        let mut offset: u64 = 0;
        for i in 0..lead {
            offset += q.pow((self.dim - i) as u32);
        }
        let mut digits: u64 = 0;
        for c in &coords[lead + 1..] {
            digits = digits * q + self.field.elem_index(c);
        }
        offset + digits
    }
}

fn too_many() -> Error {
    Error::InvalidInput("projective point count overflows u64".into())
}

/// A morphism with coefficients reduced into one fixed field, for repeated
/// evaluation without per-call coefficient reduction.
struct ReducedMap {
    terms: Vec<Vec<(Vec<u32>, FqElem)>>,
}

impl ReducedMap {
    fn new(f: &ProjMorphism, field: &FiniteField) -> Self {
        let terms = f
            .forms()
            .iter()
            .map(|form| {
                form.terms()
                    .filter_map(|(exps, coeff)| {
                        let c = field.reduce_int(coeff);
                        (!c.is_zero()).then(|| (exps.clone(), c))
                    })
                    .collect()
            })
            .collect();
        ReducedMap { terms }
    }

    /// Image coordinates, not yet normalized.  All-zero output cannot occur
    /// at a prime of good reduction.
    fn apply(&self, field: &FiniteField, coords: &[FqElem]) -> Result<Vec<FqElem>> {
        let out: Vec<FqElem> = self
            .terms
            .iter()
            .map(|form| {
                let mut acc = field.zero();
                for (exps, coeff) in form {
                    let mut term = coeff.clone();
                    for (x, &e) in coords.iter().zip(exps.iter()) {
                        if e > 0 {
                            term = field.mul(&term, &field.pow(x, e as u64));
                        }
                    }
                    acc = field.add(&acc, &term);
                }
                acc
            })
            .collect();
        if out.iter().all(|c| c.is_zero()) {
            return Err(Error::BadReduction { p: field.p() });
        }
        Ok(out)
    }
}

/// Err(BadReduction) unless p avoids the certificate value of f.
fn require_good_reduction(f: &ProjMorphism, p: u64) -> Result<()> {
    let value = f.certificate().value().magnitude();
    if (value % num_bigint::BigUint::from(p)).is_zero() {
        return Err(Error::BadReduction { p });
    }
    Ok(())
}

/// The full functional graph of f on P^N(F_{q^r}): every point's successor,
/// its distance to the unique cycle it feeds (tail), and that cycle's length.
pub struct FunctionalGraph {
    codec: PointCodec,
    successor: Vec<u32>,
    tail: Vec<u32>,
    period: Vec<u32>,
}

impl FunctionalGraph {
    pub fn codec(&self) -> &PointCodec {
        &self.codec
    }

    pub fn field(&self) -> &FiniteField {
        self.codec.field()
    }

    /// Number of points, equal to `codec().count()`.
    pub fn len(&self) -> usize {
        self.successor.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, idx: u32) -> ProjPointF {
        self.codec.decode(idx as u64)
    }

    pub fn index(&self, u: &ProjPointF) -> u32 {
        self.codec.encode(u) as u32
    }

    pub fn successor(&self, idx: u32) -> u32 {
        self.successor[idx as usize]
    }

    /// Steps until the forward orbit of idx first lands on its cycle;
    /// zero exactly when the point is periodic.
    pub fn tail(&self, idx: u32) -> u32 {
        self.tail[idx as usize]
    }

    /// Length of the cycle the forward orbit of idx falls into.
    pub fn period(&self, idx: u32) -> u32 {
        self.period[idx as usize]
    }

    pub fn is_periodic(&self, idx: u32) -> bool {
        self.tail[idx as usize] == 0
    }

    pub fn periodic_count(&self) -> u64 {
        self.tail.iter().filter(|&&t| t == 0).count() as u64
    }

    /// Indices of all periodic points, ascending.
    pub fn periodic_indices(&self) -> Vec<u32> {
        (0..self.len() as u32).filter(|&i| self.is_periodic(i)).collect()
    }

    /// (cycle length, number of cycles of that length), ascending by length.
    pub fn cycle_structure(&self) -> Vec<(u32, u64)> {
        let mut nodes: BTreeMap<u32, u64> = BTreeMap::new();
        for i in 0..self.len() as u32 {
            if self.is_periodic(i) {
                *nodes.entry(self.period(i)).or_insert(0) += 1;
            }
        }
        nodes
            .into_iter()
            .map(|(len, n)| {
                debug_assert_eq!(n % len as u64, 0);
                (len, n / len as u64)
            })
            .collect()
    }
}

/// Build the functional graph of f on P^N(F_q) for the given field.
///
/// Requires good reduction at the field characteristic.  The successor array
/// is filled in parallel; cycles are then found by pointer-chasing with
/// memoization, so construction is linear in the point count.
pub fn build_graph(f: &ProjMorphism, field: &FiniteField) -> Result<FunctionalGraph> {
    require_good_reduction(f, field.p())?;
    let codec = PointCodec::new(field.clone(), f.dim())?;
    let n = codec.count();
    if n > u32::MAX as u64 {
        return Err(Error::InvalidInput(format!(
            "graph on {} points exceeds the u32 index space",
            n
        )));
    }
    let n = n as usize;
    let reduced = ReducedMap::new(f, field);
    let successor: Vec<u32> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let u = codec.decode(i);
            let image = reduced.apply(field, u.coords())?;
            let v = ProjPointF::new(field.clone(), image)?;
            Ok(codec.encode(&v) as u32)
        })
        .collect::<Result<_>>()?;

    let mut tail = vec![0u32; n];
    let mut period = vec![0u32; n];
    // 0 = unvisited, 1 = on the current path, 2 = resolved.
    let mut state = vec![0u8; n];
    let mut path_pos = vec![0u32; n];
    let mut path: Vec<u32> = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        path.clear();
        let mut u = start as u32;
        while state[u as usize] == 0 {
            state[u as usize] = 1;
            path_pos[u as usize] = path.len() as u32;
            path.push(u);
            u = successor[u as usize];
        }
        // u is either on the current path (a new cycle) or already resolved.
        let cut = if state[u as usize] == 1 {
            let first = path_pos[u as usize] as usize;
            let plen = (path.len() - first) as u32;
            for &v in &path[first..] {
                tail[v as usize] = 0;
                period[v as usize] = plen;
                state[v as usize] = 2;
            }
            first
        } else {
            path.len()
        };
        // Everything before the cut drains into the resolved part.
        let (mut t, p0) = if cut == path.len() {
            (tail[u as usize], period[u as usize])
        } else {
            (0, period[path[cut] as usize])
        };
        for &v in path[..cut].iter().rev() {
            t += 1;
            tail[v as usize] = t;
            period[v as usize] = p0;
            state[v as usize] = 2;
        }
    }
    Ok(FunctionalGraph { codec, successor, tail, period })
}

/// Periodic-point counts of f on P^N(F_{p^r}) for r = 1..=r_max, as
/// (r, count) rows.  Each extension field is built once.
pub fn periodic_growth(f: &ProjMorphism, p: u64, r_max: u32) -> Result<Vec<(u32, u64)>> {
    require_good_reduction(f, p)?;
    if r_max == 0 {
        return Err(Error::InvalidInput("r_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let field = FiniteField::new(p, r)?;
        let graph = build_graph(f, &field)?;
        rows.push((r, graph.periodic_count()));
    }
    Ok(rows)
}

/// All u in P^N(F_{p^r}) with f(u) = Frob^m(u), where Frob is the p-power
/// Frobenius.  Solved by exhaustive enumeration; results ascend by codec
/// index.  Any solution satisfies f^r(u) = u, since Frob^r is the identity
/// on F_{p^r} and f commutes with Frob (f has coefficients in F_p).
pub fn frobenius_twist_solve(
    f: &ProjMorphism,
    p: u64,
    m: u32,
    r: u32,
) -> Result<Vec<ProjPointF>> {
    require_good_reduction(f, p)?;
    if m == 0 || r == 0 {
        return Err(Error::InvalidInput("twist exponent and extension degree must be at least 1".into()));
    }
    let field = FiniteField::new(p, r)?;
    let codec = PointCodec::new(field.clone(), f.dim())?;
    let reduced = ReducedMap::new(f, &field);
    let hits: Vec<u64> = (0..codec.count())
        .into_par_iter()
        .map(|i| {
            let u = codec.decode(i);
            let image = reduced.apply(&field, u.coords())?;
            let fu = ProjPointF::new(field.clone(), image)?;
            let twisted = frobenius(&u, p, m);
            Ok((fu == twisted).then_some(i))
        })
        .collect::<Result<Vec<Option<u64>>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(hits.into_iter().map(|i| codec.decode(i)).collect())
}

/// A periodic point found inside the open set where `avoid` is nonzero.
#[derive(Clone, Debug)]
pub struct DensityWitness {
    /// Smallest extension degree over F_p containing the witness.
    pub r: u32,
    pub point: ProjPointF,
    pub period: u32,
}

/// Search P^N(F_{p^r}) for r = 1, 2, ... for a periodic point of f at which
/// the form `avoid` does not vanish.  Returns the first hit (smallest r,
/// then smallest codec index) or None if none exists up to r_max; a None is
/// inconclusive, not a proof of emptiness.
pub fn density_in_open(
    f: &ProjMorphism,
    p: u64,
    avoid: &HomogeneousForm,
    r_max: u32,
) -> Result<Option<DensityWitness>> {
    require_good_reduction(f, p)?;
    if avoid.n_vars() != f.dim() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "avoidance form in {} variables against a map of P^{}",
            avoid.n_vars(),
            f.dim()
        )));
    }
    for r in 1..=r_max {
        let field = FiniteField::new(p, r)?;
        let graph = build_graph(f, &field)?;
        for idx in graph.periodic_indices() {
            let u = graph.point(idx);
            let value = eval_form_fq(avoid, &field, u.coords());
            if !value.is_zero() {
                return Ok(Some(DensityWitness { r, point: u, period: graph.period(idx) }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn squaring() -> ProjMorphism {
        let f0 = HomogeneousForm::from_terms_i64(2, 2, &[(&[2, 0], 1)]).unwrap();
        let f1 = HomogeneousForm::from_terms_i64(2, 2, &[(&[0, 2], 1)]).unwrap();
        ProjMorphism::new(vec![f0, f1]).unwrap()
    }

    fn x_squared_plus_one() -> ProjMorphism {
        let f0 = HomogeneousForm::from_terms_i64(2, 2, &[(&[2, 0], 1), (&[0, 2], 1)]).unwrap();
        let f1 = HomogeneousForm::from_terms_i64(2, 2, &[(&[0, 2], 1)]).unwrap();
        ProjMorphism::new(vec![f0, f1]).unwrap()
    }

    fn x_squared_minus_one() -> ProjMorphism {
        let f0 = HomogeneousForm::from_terms_i64(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]).unwrap();
        let f1 = HomogeneousForm::from_terms_i64(2, 2, &[(&[0, 2], 1)]).unwrap();
        ProjMorphism::new(vec![f0, f1]).unwrap()
    }

    fn affine(field: &FiniteField, x: i64) -> ProjPointF {
        ProjPointF::from_ints(field.clone(), &[x, 1]).unwrap()
    }

    fn infinity(field: &FiniteField) -> ProjPointF {
        ProjPointF::from_ints(field.clone(), &[1, 0]).unwrap()
    }

    #[test]
    fn codec_counts_points_of_projective_space() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(PointCodec::new(f3.clone(), 1).unwrap().count(), 4);
        assert_eq!(PointCodec::new(f3, 2).unwrap().count(), 13);
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(PointCodec::new(f4, 2).unwrap().count(), 21);
        let f9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(PointCodec::new(f9, 1).unwrap().count(), 10);
    }

    #[test]
    fn codec_round_trips_every_point() {
        for (p, r, dim) in [(3u64, 1u32, 1usize), (2, 2, 2), (5, 1, 2), (3, 2, 1)] {
            let field = FiniteField::new(p, r).unwrap();
            let codec = PointCodec::new(field, dim).unwrap();
            let mut seen = std::collections::HashSet::new();
            for i in 0..codec.count() {
                let u = codec.decode(i);
                assert_eq!(codec.encode(&u), i);
                assert!(seen.insert(format!("{:?}", u.coords())), "duplicate point at {}", i);
            }
        }
    }

    #[test]
    fn squaring_graph_on_f3() {
        let field = FiniteField::new(3, 1).unwrap();
        let g = build_graph(&squaring(), &field).unwrap();
        assert_eq!(g.len(), 4);
        // 0, 1 and the point at infinity are fixed; 2 squares to 1.
        for pt in [affine(&field, 0), affine(&field, 1), infinity(&field)] {
            let i = g.index(&pt);
            assert_eq!(g.successor(i), i);
            assert_eq!((g.tail(i), g.period(i)), (0, 1));
        }
        let two = g.index(&affine(&field, 2));
        assert_eq!(g.successor(two), g.index(&affine(&field, 1)));
        assert_eq!((g.tail(two), g.period(two)), (1, 1));
        assert_eq!(g.periodic_count(), 3);
        assert_eq!(g.cycle_structure(), vec![(1, 3)]);
    }

    #[test]
    fn x_squared_plus_one_graph_on_f5() {
        let field = FiniteField::new(5, 1).unwrap();
        let g = build_graph(&x_squared_plus_one(), &field).unwrap();
        assert_eq!(g.len(), 6);
        let at = |x: i64| g.index(&affine(&field, x));
        // 0 -> 1 -> 2 -> 0 is a 3-cycle; 3 -> 0 and 4 -> 2 feed it.
        assert_eq!(g.successor(at(0)), at(1));
        assert_eq!(g.successor(at(1)), at(2));
        assert_eq!(g.successor(at(2)), at(0));
        assert_eq!(g.successor(at(3)), at(0));
        assert_eq!(g.successor(at(4)), at(2));
        for x in [0, 1, 2] {
            assert_eq!((g.tail(at(x)), g.period(at(x))), (0, 3));
        }
        for x in [3, 4] {
            assert_eq!((g.tail(at(x)), g.period(at(x))), (1, 3));
        }
        let inf = g.index(&infinity(&field));
        assert_eq!(g.successor(inf), inf);
        assert_eq!((g.tail(inf), g.period(inf)), (0, 1));
        assert_eq!(g.periodic_count(), 4);
        assert_eq!(g.cycle_structure(), vec![(1, 1), (3, 1)]);
    }

    #[test]
    fn squaring_fixes_all_of_p1_f2() {
        let field = FiniteField::new(2, 1).unwrap();
        let g = build_graph(&squaring(), &field).unwrap();
        assert_eq!(g.len(), 3);
        for i in 0..3 {
            assert_eq!(g.successor(i), i);
            assert!(g.is_periodic(i));
        }
    }

    #[test]
    fn graph_rejects_bad_reduction_prime() {
        // (2X^2 + Z^2 : Z^2) has certificate value 4: mod 2 both forms
        // vanish at (1 : 0), so the reduction is not a morphism.
        let f0 = HomogeneousForm::from_terms_i64(2, 2, &[(&[2, 0], 2), (&[0, 2], 1)]).unwrap();
        let f1 = HomogeneousForm::from_terms_i64(2, 2, &[(&[0, 2], 1)]).unwrap();
        let f = ProjMorphism::new(vec![f0, f1]).unwrap();
        let err = build_graph(&f, &FiniteField::new(2, 1).unwrap());
        match err {
            Err(Error::BadReduction { p }) => assert_eq!(p, 2),
            other => panic!("expected BadReduction, got {:?}", other.map(|g| g.len())),
        }
        // The same prime is rejected by the growth and twist entry points.
        assert!(matches!(periodic_growth(&f, 2, 2), Err(Error::BadReduction { p: 2 })));
        assert!(matches!(frobenius_twist_solve(&f, 2, 1, 1), Err(Error::BadReduction { p: 2 })));
        // At an odd prime the same map reduces fine.
        assert!(build_graph(&f, &FiniteField::new(3, 1).unwrap()).is_ok());
    }

    #[test]
    fn successor_agrees_with_direct_application() {
        let f = x_squared_minus_one();
        let field = FiniteField::new(7, 1).unwrap();
        let g = build_graph(&f, &field).unwrap();
        for i in 0..g.len() as u32 {
            let u = g.point(i);
            let direct = f.apply_f(&u).unwrap();
            assert_eq!(g.point(g.successor(i)), direct);
        }
    }

    #[test]
    fn tail_iterates_onto_a_cycle_of_the_stated_period() {
        let f = x_squared_plus_one();
        let field = FiniteField::new(3, 2).unwrap();
        let g = build_graph(&f, &field).unwrap();
        for i in 0..g.len() as u32 {
            let mut u = i;
            for _ in 0..g.tail(i) {
                u = g.successor(u);
            }
            assert!(g.is_periodic(u));
            assert_eq!(g.period(u), g.period(i));
            let mut v = u;
            for _ in 0..g.period(i) {
                v = g.successor(v);
            }
            assert_eq!(v, u, "cycle does not close at the stated period");
        }
    }

    #[test]
    fn squaring_growth_over_f3_extensions() {
        // Periodic points of x -> x^2 over F_{3^r}: the odd-order roots of
        // unity plus 0 and infinity, so 2 + largest odd divisor of 3^r - 1.
        let rows = periodic_growth(&squaring(), 3, 4).unwrap();
        assert_eq!(rows, vec![(1, 3), (2, 3), (3, 15), (4, 7)]);
    }

    #[test]
    fn growth_is_monotone_along_extension_divisibility() {
        for f in [squaring(), x_squared_plus_one()] {
            let rows = periodic_growth(&f, 3, 6).unwrap();
            let count = |r: u32| rows[(r - 1) as usize].1;
            for r in 1..=6u32 {
                for s in 1..=6u32 {
                    if s % r == 0 {
                        assert!(
                            count(r) <= count(s),
                            "periodic count dropped from r={} to r={}",
                            r,
                            s
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn twist_solutions_for_squaring_mod_5() {
        // Over the prime field Frobenius is the identity, so this is the
        // fixed-point equation: {0, 1, infinity}.
        let field = FiniteField::new(5, 1).unwrap();
        let sols = frobenius_twist_solve(&squaring(), 5, 1, 1).unwrap();
        let expect = [infinity(&field), affine(&field, 1), affine(&field, 0)];
        assert_eq!(sols.len(), 3);
        for e in &expect {
            assert!(sols.contains(e), "missing solution {:?}", e.coords());
        }
    }

    #[test]
    fn twist_solutions_for_x_squared_plus_one_mod_2() {
        let field = FiniteField::new(2, 1).unwrap();
        let sols = frobenius_twist_solve(&x_squared_plus_one(), 2, 1, 1).unwrap();
        assert_eq!(sols, vec![infinity(&field)]);
    }

    #[test]
    fn twist_solutions_in_a_quadratic_extension() {
        // x^2 = x^3 in F_9 forces x in {0, 1}, plus the fixed point at
        // infinity.
        let sols = frobenius_twist_solve(&squaring(), 3, 1, 2).unwrap();
        let field = sols[0].field().clone();
        assert_eq!(sols.len(), 3);
        assert!(sols.contains(&infinity(&field)));
        assert!(sols.contains(&affine(&field, 0)));
        assert!(sols.contains(&affine(&field, 1)));
    }

    #[test]
    fn twist_solutions_return_to_themselves_after_r_steps() {
        let maps = [squaring(), x_squared_plus_one()];
        for f in &maps {
            for p in [3u64, 5] {
                for m in 1..=3u32 {
                    for r in 1..=4u32 {
                        for u in frobenius_twist_solve(f, p, m, r).unwrap() {
                            let mut v = u.clone();
                            for _ in 0..r {
                                v = f.apply_f(&v).unwrap();
                            }
                            assert_eq!(v, u, "f^{}(u) != u at p={} m={}", r, p, m);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twist_solution_count_matches_brute_force() {
        let f = x_squared_plus_one();
        let p = 3u64;
        let (m, r) = (2u32, 3u32);
        let field = FiniteField::new(p, r).unwrap();
        let codec = PointCodec::new(field.clone(), 1).unwrap();
        let mut expected = Vec::new();
        for i in 0..codec.count() {
            let u = codec.decode(i);
            if f.apply_f(&u).unwrap() == frobenius(&u, p, m) {
                expected.push(u);
            }
        }
        assert_eq!(frobenius_twist_solve(&f, p, m, r).unwrap(), expected);
    }

    #[test]
    fn density_witness_at_infinity_in_the_base_field() {
        // Avoiding {X = 0} only rules out the origin; infinity is periodic
        // already over F_3.
        let avoid = HomogeneousForm::monomial(vec![1, 0], BigInt::from(1));
        let w = density_in_open(&squaring(), 3, &avoid, 4).unwrap().unwrap();
        assert_eq!(w.r, 1);
        assert_eq!(w.period, 1);
        let field = FiniteField::new(3, 1).unwrap();
        assert_eq!(w.point, infinity(&field));
    }

    #[test]
    fn density_witness_needs_a_cubic_extension() {
        // XZ(X - Z) kills 0, 1 and infinity, the only periodic points of
        // squaring over F_3 and F_9.  Over F_27 the nontrivial 13th roots of
        // unity are periodic and avoid all three, so the search first
        // succeeds at r = 3, on a cycle of length ord_13(2) = 12.
        let avoid = HomogeneousForm::from_terms_i64(2, 3, &[(&[2, 1], 1), (&[1, 2], -1)]).unwrap();
        let w = density_in_open(&squaring(), 3, &avoid, 5).unwrap().unwrap();
        assert_eq!(w.r, 3);
        assert_eq!(w.period, 12);
        let field = w.point.field().clone();
        assert_eq!(field.order(), 27);
        assert!(!eval_form_fq(&avoid, &field, w.point.coords()).is_zero());
        // And the witness really is periodic of that period.
        let f = squaring();
        let mut v = w.point.clone();
        for _ in 0..w.period {
            v = f.apply_f(&v).unwrap();
        }
        assert_eq!(v, w.point);
    }

    #[test]
    fn density_search_can_come_up_empty() {
        // Avoiding the whole plane via the zero form has no witnesses.
        let avoid = HomogeneousForm::zero(2, 1);
        assert!(density_in_open(&squaring(), 3, &avoid, 3).unwrap().is_none());
    }

    #[test]
    fn density_rejects_mismatched_avoidance_form() {
        let avoid = HomogeneousForm::monomial(vec![1, 0, 0], BigInt::from(1));
        assert!(matches!(
            density_in_open(&squaring(), 3, &avoid, 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn plane_squaring_graph_counts() {
        let f0 = HomogeneousForm::from_terms_i64(3, 2, &[(&[2, 0, 0], 1)]).unwrap();
        let f1 = HomogeneousForm::from_terms_i64(3, 2, &[(&[0, 2, 0], 1)]).unwrap();
        let f2 = HomogeneousForm::from_terms_i64(3, 2, &[(&[0, 0, 2], 1)]).unwrap();
        let f = ProjMorphism::new(vec![f0, f1, f2]).unwrap();
        let field = FiniteField::new(5, 1).unwrap();
        let g = build_graph(&f, &field).unwrap();
        assert_eq!(g.len(), 31);
        for i in 0..g.len() as u32 {
            let u = g.point(i);
            assert_eq!(g.point(g.successor(i)), f.apply_f(&u).unwrap());
        }
    }
}
