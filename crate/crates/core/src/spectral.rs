//! Exact characteristic polynomials and generalized spectra.
//!
//! Polynomials are computed with Berkowitz's division-free algorithm, so any
//! integer type with checked arithmetic works. [`charpoly`] runs in `i128`
//! and falls back to [`BigInt`] if an intermediate value would overflow.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{bits, full_mask, Graph};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("graphs have different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
}

/// Integer types the characteristic polynomial can be computed over.
pub trait Coefficient: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul {}

impl<T: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul> Coefficient for T {}

/// Monic polynomial, coefficients stored from the leading term down to the
/// constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T> Polynomial<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial has at least a leading coefficient");
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient first.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn map<U>(self, f: impl FnMut(T) -> U) -> Polynomial<U> {
        Polynomial { coeffs: self.coeffs.into_iter().map(f).collect() }
    }
}

impl<T: Coefficient> Polynomial<T> {
    /// Product, or `None` on overflow.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(&a.checked_mul(b)?)?;
            }
        }
        Some(Polynomial { coeffs: out })
    }
}

/// Space separated: the degree, then every coefficient from the leading one
/// down to the constant.
impl<T: fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree())?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

pub type IntPolynomial = Polynomial<BigInt>;

/// `det(xI - M)` for a square matrix, or `None` if the integer type
/// overflows along the way.
pub fn charpoly_checked<T: Coefficient>(m: &[Vec<T>]) -> Option<Polynomial<T>> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let neg = |x: &T| T::zero().checked_sub(x);
    let mut p = vec![T::one()];
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for r in 0..n {
        // first column of the Toeplitz factor: 1, -m_rr, -R C, -R M C, ...
        let mut t = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(neg(&m[r][r])?);
        v.clear();
        v.extend((0..r).map(|i| m[i][r].clone()));
        for k in 0..r {
            let mut dot = T::zero();
            for (j, x) in v.iter().enumerate() {
                if !m[r][j].is_zero() && !x.is_zero() {
                    dot = dot.checked_add(&m[r][j].checked_mul(x)?)?;
                }
            }
            t.push(neg(&dot)?);
            if k + 1 < r {
                w.clear();
                for row in &m[..r] {
                    let mut s = T::zero();
                    for (a, x) in row[..r].iter().zip(&v) {
                        if !a.is_zero() && !x.is_zero() {
                            s = s.checked_add(&a.checked_mul(x)?)?;
                        }
                    }
                    w.push(s);
                }
                std::mem::swap(&mut v, &mut w);
            }
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=i.min(r) {
                if !p[j].is_zero() && !t[i - j].is_zero() {
                    *slot = slot.checked_add(&t[i - j].checked_mul(&p[j])?)?;
                }
            }
        }
        p = next;
    }
    Some(Polynomial { coeffs: p })
}

/// Exact characteristic polynomial of an integer matrix.
pub fn charpoly(m: &[Vec<i64>]) -> IntPolynomial {
    let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if let Some(p) = charpoly_checked(&wide) {
        return p.map(BigInt::from);
    }
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    charpoly_checked(&big).expect("BigInt arithmetic cannot overflow")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Adjacency,
    /// Degree diagonal plus adjacency.
    SignlessLaplacian,
}

impl SpectrumKind {
    pub fn tag(self) -> &'static str {
        match self {
            SpectrumKind::Adjacency => "A",
            SpectrumKind::SignlessLaplacian => "Q",
        }
    }
}

pub fn spectral_matrix(g: &Graph, kind: SpectrumKind) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = g.adjacency_matrix();
    if kind == SpectrumKind::SignlessLaplacian {
        for (v, row) in m.iter_mut().enumerate() {
            row[v] = g.degree(v) as i64;
        }
    }
    m
}

/// Characteristic polynomial of the chosen matrix of `g`.
pub fn graph_charpoly(g: &Graph, kind: SpectrumKind) -> IntPolynomial {
    charpoly(&spectral_matrix(g, kind))
}

/// `i128` characteristic polynomial, when it fits. Same recurrence as
/// [`charpoly_checked`], with matrix-vector products read off the
/// neighbourhood bitmasks.
pub(crate) fn graph_charpoly_i128(g: &Graph, kind: SpectrumKind) -> Option<Polynomial<i128>> {
    let n = g.order();
    let diag: Vec<i128> = match kind {
        SpectrumKind::Adjacency => vec![0; n],
        SpectrumKind::SignlessLaplacian => (0..n).map(|v| g.degree(v) as i128).collect(),
    };
    let sum_over = |mask: u64, v: &[i128]| bits(mask).try_fold(0i128, |acc, j| acc.checked_add(v[j]));
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    let mut next = vec![0i128; n + 1];
    let mut t = vec![0i128; n + 1];
    let mut v = vec![0i128; n];
    let mut w = vec![0i128; n];
    for r in 0..n {
        let below = full_mask(r);
        let row = g.neighbors(r) & below;
        t[0] = 1;
        t[1] = -diag[r];
        for (i, x) in v[..r].iter_mut().enumerate() {
            *x = (row >> i & 1) as i128;
        }
        for k in 0..r {
            t[k + 2] = sum_over(row, &v)?.checked_neg()?;
            if k + 1 < r {
                for (i, out) in w[..r].iter_mut().enumerate() {
                    *out = diag[i].checked_mul(v[i])?.checked_add(sum_over(g.neighbors(i) & below, &v)?)?;
                }
                std::mem::swap(&mut v, &mut w);
            }
        }
        for (i, slot) in next[..r + 2].iter_mut().enumerate() {
            let mut acc = 0i128;
            for j in i.saturating_sub(r + 1)..=i.min(r) {
                if p[j] != 0 && t[i - j] != 0 {
                    acc = acc.checked_add(t[i - j].checked_mul(p[j])?)?;
                }
            }
            *slot = acc;
        }
        std::mem::swap(&mut p, &mut next);
    }
    Some(Polynomial { coeffs: p })
}

/// Spectra of a graph and of its complement, as exact polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenSpectrum {
    pub kind: SpectrumKind,
    pub p: IntPolynomial,
    pub pc: IntPolynomial,
}

impl GenSpectrum {
    /// The generalized spectrum of the complement graph.
    pub fn swapped(&self) -> GenSpectrum {
        GenSpectrum { kind: self.kind, p: self.pc.clone(), pc: self.p.clone() }
    }
}

pub fn gen_spectrum(g: &Graph, kind: SpectrumKind) -> GenSpectrum {
    GenSpectrum { kind, p: graph_charpoly(g, kind), pc: graph_charpoly(&g.complement(), kind) }
}

pub fn is_generalized_cospectral(g: &Graph, h: &Graph, kind: SpectrumKind) -> Result<bool, SpectralError> {
    if g.order() != h.order() {
        return Err(SpectralError::OrderMismatch(g.order(), h.order()));
    }
    Ok(gen_spectrum(g, kind) == gen_spectrum(h, kind))
}

/// Injective byte key: kind tag, then both polynomials in their text form.
pub fn fingerprint(gs: &GenSpectrum) -> Vec<u8> {
    format!("{}|{}|{}", gs.kind.tag(), gs.p, gs.pc).into_bytes()
}

/// 128-bit digest of a generalized spectrum, for pre-bucketing only.
/// Equal spectra always share a digest; equal digests must still be
/// confirmed by exact comparison.
pub fn digest<P: Hash>(kind: SpectrumKind, p: &P, pc: &P) -> u128 {
    let half = |salt: u64| {
        let mut h = DefaultHasher::new();
        salt.hash(&mut h);
        kind.hash(&mut h);
        p.hash(&mut h);
        pc.hash(&mut h);
        h.finish()
    };
    (half(0x9e37_79b9) as u128) << 64 | half(0x7f4a_7c15) as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph6;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> IntPolynomial {
        Polynomial::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Oracle: det(xI - M) by cofactor expansion over polynomials with
    /// coefficients stored lowest degree first.
    fn cofactor_charpoly(m: &[Vec<i64>]) -> Vec<i64> {
        fn det(entries: &[Vec<Vec<i64>>]) -> Vec<i64> {
            let n = entries.len();
            if n == 1 {
                return entries[0][0].clone();
            }
            let mut acc = vec![0i64; n + 1];
            for c in 0..n {
                let minor: Vec<Vec<Vec<i64>>> = entries[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, e)| e.clone()).collect())
                    .collect();
                let sub = det(&minor);
                let sign = if c % 2 == 0 { 1 } else { -1 };
                for (i, a) in entries[0][c].iter().enumerate() {
                    for (j, b) in sub.iter().enumerate() {
                        acc[i + j] += sign * a * b;
                    }
                }
            }
            acc
        }
        let n = m.len();
        let entries: Vec<Vec<Vec<i64>>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { vec![-m[i][j], 1] } else { vec![-m[i][j]] }).collect()).collect();
        let mut low_first = det(&entries);
        low_first.resize(n + 1, 0);
        low_first.reverse();
        low_first
    }

    fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            for u in 0..v {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn small_examples() {
        assert_eq!(graph_charpoly(&Graph::complete(2), SpectrumKind::Adjacency), poly(&[1, 0, -1]));
        assert_eq!(graph_charpoly(&Graph::empty(5), SpectrumKind::Adjacency), poly(&[1, 0, 0, 0, 0, 0]));
        assert_eq!(graph_charpoly(&Graph::path(4), SpectrumKind::Adjacency), poly(&[1, 0, -3, 0, 1]));
        assert_eq!(cofactor_charpoly(&spectral_matrix(&Graph::path(4), SpectrumKind::Adjacency)), vec![1, 0, -3, 0, 1]);
        assert_eq!(poly(&[1, 0, -3, 0, 1]).to_string(), "4 1 0 -3 0 1");
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let g = random_graph(&mut rng, n);
            for kind in [SpectrumKind::Adjacency, SpectrumKind::SignlessLaplacian] {
                let m = spectral_matrix(&g, kind);
                assert_eq!(graph_charpoly(&g, kind), poly(&cofactor_charpoly(&m)));
            }
        }
        // non-symmetric integer matrix too
        let m = vec![vec![2, -1, 0], vec![3, 5, 7], vec![-4, 1, 1]];
        assert_eq!(charpoly(&m), poly(&cofactor_charpoly(&m)));
    }

    #[test]
    fn bigint_fallback_agrees() {
        let m: Vec<Vec<i64>> = (0..12)
            .map(|i| (0..12).map(|j| 1_000_000_007 * ((i * 7 + j * 3) % 5) as i64 - 2_000_000_000).collect())
            .collect();
        let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        assert!(charpoly_checked(&wide).is_none());
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(charpoly(&m), charpoly_checked(&big).unwrap());
        assert_eq!(charpoly(&m).coeffs()[1], -m.iter().enumerate().map(|(i, r)| BigInt::from(r[i])).sum::<BigInt>());
    }

    #[test]
    fn union_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (a, b) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let (g, h) = (random_graph(&mut rng, a), random_graph(&mut rng, b));
            let lhs = graph_charpoly(&g.disjoint_union(&h), SpectrumKind::Adjacency);
            let rhs = graph_charpoly(&g, SpectrumKind::Adjacency)
                .checked_mul(&graph_charpoly(&h, SpectrumKind::Adjacency))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn newton_identities_recover_walk_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.gen_range(2..=10);
            let g = random_graph(&mut rng, n);
            let c: Vec<BigInt> = graph_charpoly(&g, SpectrumKind::Adjacency).coeffs().to_vec();
            // direct traces of A^k
            let a: Vec<Vec<i64>> = g.adjacency_matrix();
            let mut pow = a.clone();
            let mut traces = vec![BigInt::zero()];
            for _ in 1..=n {
                traces.push(BigInt::from((0..n).map(|i| pow[i][i]).sum::<i64>()));
                pow = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| pow[i][k] * a[k][j]).sum()).collect()).collect();
            }
            for k in 1..=n {
                let mut s = BigInt::from(k) * &c[k];
                for j in 1..k {
                    s += &c[j] * &traces[k - j];
                }
                s += &traces[k];
                assert!(s.is_zero(), "newton identity k={k} fails for {g:?}");
            }
        }
    }

    #[test]
    fn bitmask_route_matches_dense_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=24 {
            for kind in [SpectrumKind::Adjacency, SpectrumKind::SignlessLaplacian] {
                let g = random_graph(&mut rng, n);
                let m: Vec<Vec<i128>> =
                    spectral_matrix(&g, kind).into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
                assert_eq!(graph_charpoly_i128(&g, kind), charpoly_checked(&m), "{g:?} {kind:?}");
            }
        }
    }

    #[test]
    fn generalized_spectra() {
        let a = parse_graph6("N]?GWWGAGP@FAMAM@F?").unwrap();
        let b = parse_graph6("Ns_??KF@oK?p@a@b_po").unwrap();
        let ga = gen_spectrum(&a, SpectrumKind::Adjacency);
        assert_eq!(ga, gen_spectrum(&b, SpectrumKind::Adjacency));
        assert_eq!(fingerprint(&ga), fingerprint(&gen_spectrum(&b, SpectrumKind::Adjacency)));
        assert_eq!(gen_spectrum(&a.complement(), SpectrumKind::Adjacency), ga.swapped());

        let star = Graph::star(3);
        let k3k1 = Graph::complete(3).disjoint_union(&Graph::empty(1));
        // x(x-1)^2(x-4) = x^4 - 6x^3 + 9x^2 - 4x
        let q = poly(&[1, -6, 9, -4, 0]);
        assert_eq!(graph_charpoly(&star, SpectrumKind::SignlessLaplacian), q);
        assert_eq!(graph_charpoly(&k3k1, SpectrumKind::SignlessLaplacian), q);
        assert!(is_generalized_cospectral(&star, &k3k1, SpectrumKind::SignlessLaplacian).unwrap());
        assert!(!is_generalized_cospectral(&star, &k3k1, SpectrumKind::Adjacency).unwrap());
        assert!(!is_generalized_cospectral(&Graph::complete(2), &Graph::empty(2), SpectrumKind::Adjacency).unwrap());
        assert_eq!(
            is_generalized_cospectral(&Graph::empty(2), &Graph::empty(3), SpectrumKind::Adjacency),
            Err(SpectralError::OrderMismatch(2, 3))
        );
    }

    #[test]
    fn complement_pairing_and_digest() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(1..=12);
            let g = random_graph(&mut rng, n);
            let gs = gen_spectrum(&g, SpectrumKind::Adjacency);
            let gc = gen_spectrum(&g.complement(), SpectrumKind::Adjacency);
            assert_eq!(gc.p, gs.pc);
            let small = graph_charpoly_i128(&g, SpectrumKind::Adjacency).unwrap();
            assert_eq!(small.clone().map(BigInt::from), gs.p);
            let d1 = digest(SpectrumKind::Adjacency, &gs.p, &gs.pc);
            assert_eq!(d1, digest(SpectrumKind::Adjacency, &gs.p, &gs.pc));
            assert_ne!(d1, digest(SpectrumKind::SignlessLaplacian, &gs.p, &gs.pc));
        }
    }

    proptest! {
        #[test]
        fn invariant_under_relabelling(n in 1usize..=20, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, n);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.relabeled(&perm);
            let e = g.edge_count() as i128;
            for kind in [SpectrumKind::Adjacency, SpectrumKind::SignlessLaplacian] {
                let p = graph_charpoly_i128(&g, kind).unwrap();
                prop_assert_eq!(Some(p.clone()), graph_charpoly_i128(&h, kind));
                prop_assert_eq!(gen_spectrum(&g, kind), gen_spectrum(&h, kind));
                let c = p.coeffs();
                match kind {
                    SpectrumKind::Adjacency if n >= 2 => {
                        prop_assert_eq!(c[1], 0);
                        prop_assert_eq!(c[2], -e);
                    }
                    SpectrumKind::SignlessLaplacian => prop_assert_eq!(c[1], -2 * e),
                    _ => {}
                }
            }
        }
    }
}
