//! Full-rank lattices in two representations (embedded rational basis or
//! positive definite Gram form), their duals, saturated sublattice planes,
//! projections along lattice planes, and complete short-vector enumeration.
//!
//! Determinants are stored and compared squared, so everything stays rational
//! even when lengths are irrational square roots.

use num_traits::{One, Signed, Zero};

use crate::ratlin::{hnf, ldlt, schur_complement, snf, Int, IntMatrix, Rat, RatMatrix};
use crate::{Budget, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeKind {
    /// Columns of the matrix are an ambient rational basis.
    Basis(RatMatrix),
    /// Positive definite rational quadratic form on integer coordinates.
    Gram(RatMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    kind: LatticeKind,
    dim: usize,
    gram: RatMatrix,
}

impl Lattice {
    pub fn from_basis(b: RatMatrix) -> Result<Self> {
        if b.rows() != b.cols() || b.rows() == 0 {
            return Err(Error::InvalidParams("basis matrix must be square and nonempty".into()));
        }
        if b.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let gram = b.transpose().mul(&b);
        Ok(Lattice { dim: b.rows(), kind: LatticeKind::Basis(b), gram })
    }

    pub fn from_gram(g: RatMatrix) -> Result<Self> {
        if g.rows() != g.cols() || g.rows() == 0 {
            return Err(Error::InvalidParams("gram matrix must be square and nonempty".into()));
        }
        ldlt(&g).map_err(|_| Error::NotPositiveDefinite)?;
        Ok(Lattice { dim: g.rows(), kind: LatticeKind::Gram(g.clone()), gram: g })
    }

    pub fn standard(n: usize) -> Self {
        Lattice::from_basis(RatMatrix::identity(n)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn is_basis_kind(&self) -> bool {
        matches!(self.kind, LatticeKind::Basis(_))
    }

    pub fn basis_matrix(&self) -> Option<&RatMatrix> {
        match &self.kind {
            LatticeKind::Basis(b) => Some(b),
            LatticeKind::Gram(_) => None,
        }
    }

    /// Gram matrix of the (implicit) basis; for Basis kind this is B^T B.
    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Squared determinant: det(G) = det(B)^2, a positive rational.
    pub fn det_squared(&self) -> Rat {
        self.gram.det()
    }

    /// Polar lattice: basis B^{-T} resp. Gram G^{-1}.
    pub fn dual(&self) -> Lattice {
        match &self.kind {
            LatticeKind::Basis(b) => {
                let binv_t = b.inverse().expect("basis is invertible").transpose();
                Lattice::from_basis(binv_t).expect("dual basis is invertible")
            }
            LatticeKind::Gram(g) => {
                let gi = g.inverse().expect("PD Gram is invertible");
                Lattice::from_gram(gi).expect("inverse of PD is PD")
            }
        }
    }

    /// Squared Euclidean length (under the lattice inner product) of an
    /// integer coordinate vector.
    pub fn norm_sq(&self, x: &[Int]) -> Rat {
        quad_form(&self.gram, x)
    }

    /// Ambient coordinates of an integer coordinate vector (Basis kind only).
    pub fn to_ambient(&self, x: &[Int]) -> Option<Vec<Rat>> {
        let b = self.basis_matrix()?;
        let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
        Some(b.mul_vec(&xr))
    }
}

/// x^T G x for integer x.
pub fn quad_form(g: &RatMatrix, x: &[Int]) -> Rat {
    let n = g.rows();
    assert_eq!(x.len(), n);
    let mut s = Rat::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let xi = Rat::from_integer(x[i].clone());
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            s += g.at(i, j) * &xi * Rat::from_integer(x[j].clone());
        }
    }
    s
}

/// A saturated rank-k sublattice, identified by its HNF-canonical integer
/// coordinate basis. Two planes are equal iff their keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePlane {
    rank: usize,
    basis: IntMatrix,
    det_sq: Rat,
}

impl LatticePlane {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn det_squared(&self) -> &Rat {
        &self.det_sq
    }

    /// Canonical identity / deterministic tie-break key.
    pub fn key(&self) -> Vec<Int> {
        self.basis.key()
    }

    /// The trivial rank-0 plane (used for the i = n packing minimum).
    pub fn trivial(dim: usize) -> Self {
        LatticePlane { rank: 0, basis: IntMatrix::zero(dim, 0), det_sq: Rat::one() }
    }
}

/// The projection of a lattice along a plane: a Gram-form lattice of rank
/// n - k together with lift data back into the parent.
#[derive(Debug, Clone)]
pub struct ProjectedLattice {
    /// Gram matrix of the projected lattice (size n-k).
    pub gram: RatMatrix,
    /// Parent integer coordinates of preimages of the projected basis
    /// vectors (n x (n-k)); column j is a lattice vector whose projection is
    /// the j-th projected basis vector.
    pub lift_coords: IntMatrix,
    /// For Basis-kind parents: ambient coordinates of the projected basis
    /// vectors (n x (n-k)); maps chart coordinates to ambient points.
    pub lift_ambient: Option<RatMatrix>,
    /// For Basis-kind parents: maps an ambient point to its chart
    /// coordinates in the projection, ((n-k) x n).
    pub chart_map: Option<RatMatrix>,
}

/// Saturate the span of the given integer coordinate vectors: returns the
/// plane Λ ∩ span(vectors) with HNF-canonical basis and its squared
/// determinant under the parent inner product.
pub fn saturate(lat: &Lattice, vectors: &IntMatrix) -> Result<LatticePlane> {
    let n = lat.dim();
    let k = vectors.cols();
    if vectors.rows() != n {
        return Err(Error::InvalidParams("vector length must match lattice dimension".into()));
    }
    if k == 0 || vectors.to_rat().rank() != k {
        return Err(Error::RankDeficient);
    }
    // W = U^{-1} S V^{-1}; the saturation is spanned by the first k columns
    // of U^{-1}.
    let (_, u, _) = snf(vectors);
    let u_inv_rat = u.to_rat().inverse().expect("U is unimodular");
    let mut cols: Vec<Vec<Int>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut col = Vec::with_capacity(n);
        for i in 0..n {
            let v = u_inv_rat.at(i, j);
            debug_assert!(v.denom().is_one());
            col.push(v.numer().clone());
        }
        cols.push(col);
    }
    let (basis, _) = hnf(&IntMatrix::from_cols(cols));
    plane_from_canonical(lat, basis)
}

fn plane_from_canonical(lat: &Lattice, basis: IntMatrix) -> Result<LatticePlane> {
    let k = basis.cols();
    let b_rat = basis.to_rat();
    let det_sq = b_rat.transpose().mul(lat.gram()).mul(&b_rat).det();
    debug_assert!(det_sq.is_positive());
    Ok(LatticePlane { rank: k, basis, det_sq })
}

/// Gram form of Λ | L^perp via basis extension (SNF) and the Schur
/// complement of the L-block in the full Gram matrix. The identity
/// detSq(Λ∩L) * detSq(Λ|L^perp) = detSq(Λ) holds exactly.
pub fn project_along(lat: &Lattice, plane: &LatticePlane) -> Result<ProjectedLattice> {
    let n = lat.dim();
    let k = plane.rank();
    if k == 0 || k >= n {
        return Err(Error::RankOutOfRange(k));
    }
    // Extend the plane basis C to a unimodular matrix [C | E]: the SNF of a
    // saturated basis is [I; 0], so the last n-k columns of U^{-1} complete it.
    let (s, u, _) = snf(plane.basis());
    for t in 0..k {
        debug_assert!(s.at(t, t).is_one(), "saturated basis has trivial divisors");
    }
    let u_inv = u.to_rat().inverse().expect("U unimodular");
    let mut full_cols: Vec<Vec<Int>> = Vec::with_capacity(n);
    for j in 0..k {
        full_cols.push(plane.basis().col(j));
    }
    for j in k..n {
        let mut col = Vec::with_capacity(n);
        for i in 0..n {
            let v = u_inv.at(i, j);
            debug_assert!(v.denom().is_one());
            col.push(v.numer().clone());
        }
        full_cols.push(col);
    }
    let ext = IntMatrix::from_cols(full_cols);
    debug_assert_eq!(ext.to_rat().det().abs(), Rat::one(), "extension is unimodular");

    let ext_rat = ext.to_rat();
    let full_gram = ext_rat.transpose().mul(lat.gram()).mul(&ext_rat);
    let pivot: Vec<usize> = (0..k).collect();
    let gram = schur_complement(&full_gram, &pivot);

    let lift_coords = IntMatrix::from_cols((k..n).map(|j| ext.col(j)).collect::<Vec<_>>());

    let (lift_ambient, chart_map) = match lat.kind() {
        LatticeKind::Basis(b) => {
            // Ambient basis of L and of the chosen preimages.
            let c_rat = plane.basis().to_rat();
            let a = b.mul(&c_rat); // n x k, ambient basis of span L
            let ata_inv = a.transpose().mul(&a).inverse().expect("full rank");
            let proj_l = a.mul(&ata_inv).mul(&a.transpose()); // projector onto L
            let pre = b.mul(&lift_coords.to_rat()); // ambient preimages
            let mut w = pre.clone();
            let pl_pre = proj_l.mul(&pre);
            for i in 0..w.rows() {
                for j in 0..w.cols() {
                    let v = w.at(i, j) - pl_pre.at(i, j);
                    *w.at_mut(i, j) = v;
                }
            }
            // chart(v) = G'^{-1} W^T v  (W ⊥ L makes the projector drop out)
            let chart = gram.inverse().expect("projected Gram is PD").mul(&w.transpose());
            (Some(w), Some(chart))
        }
        LatticeKind::Gram(_) => (None, None),
    };

    debug_assert_eq!(
        plane.det_squared() * gram.det(),
        lat.det_squared(),
        "determinant tower identity"
    );

    Ok(ProjectedLattice { gram, lift_coords, lift_ambient, chart_map })
}

/// Exact LLL reduction (delta = 3/4) driven entirely by the Gram matrix.
/// Returns the unimodular transform whose columns are the reduced basis in
/// input coordinates. Used only to seed candidates and enumeration order;
/// no downstream correctness depends on reduction quality.
pub fn lll_transform(gram: &RatMatrix) -> IntMatrix {
    let n = gram.rows();
    let mut c = IntMatrix::identity(n);
    let mut g = gram.clone();
    let delta = Rat::new(Int::from(3), Int::from(4));
    let half = Rat::new(Int::from(1), Int::from(2));

    // Gram-Schmidt data recomputed from the current Gram matrix.
    let gso = |g: &RatMatrix| -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let n = g.rows();
        let mut b = vec![Rat::zero(); n];
        let mut mu = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            let mut bi = g.at(i, i).clone();
            for j in 0..i {
                bi -= &mu[i][j] * &mu[i][j] * &b[j];
            }
            b[i] = bi;
            for k in i + 1..n {
                let mut v = g.at(k, i).clone();
                for j in 0..i {
                    v -= &mu[k][j] * &mu[i][j] * &b[j];
                }
                mu[k][i] = v / &b[i];
            }
        }
        (b, mu)
    };

    let recompute = |c: &IntMatrix| -> RatMatrix {
        let cr = c.to_rat();
        cr.transpose().mul(gram).mul(&cr)
    };

    let round = |q: &Rat| -> Int {
        // nearest integer, ties toward +infinity
        (q + &half).floor().to_integer()
    };

    let mut k = 1usize;
    let (mut b, mut mu) = gso(&g);
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].clone().abs() > half {
                let r = round(&mu[k][j]);
                let mut cols: Vec<Vec<Int>> = (0..n).map(|t| c.col(t)).collect();
                for i in 0..n {
                    let sub = &r * &cols[j][i];
                    cols[k][i] -= sub;
                }
                c = IntMatrix::from_cols(cols);
                g = recompute(&c);
                let res = gso(&g);
                b = res.0;
                mu = res.1;
            }
        }
        let lhs = b[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            let mut cols: Vec<Vec<Int>> = (0..n).map(|t| c.col(t)).collect();
            cols.swap(k, k - 1);
            c = IntMatrix::from_cols(cols);
            g = recompute(&c);
            let res = gso(&g);
            b = res.0;
            mu = res.1;
            k = k.max(2) - 1;
        }
    }
    c
}

/// All nonzero integer coordinate vectors with x^T G x <= bound_sq, one
/// representative per antipodal pair (first nonzero coordinate positive),
/// sorted by (squared length, lexicographic order). Completeness comes from
/// exact LDL^T branch-and-bound; the basis is LLL-preprocessed for speed.
pub fn enumerate_short_vectors(
    lat: &Lattice,
    bound_sq: &Rat,
    budget: &Budget,
) -> Result<Vec<(Vec<Int>, Rat)>> {
    enumerate_short_gram(lat.gram(), bound_sq, budget)
}

/// Same as `enumerate_short_vectors` but directly on a Gram matrix.
pub fn enumerate_short_gram(
    gram: &RatMatrix,
    bound_sq: &Rat,
    budget: &Budget,
) -> Result<Vec<(Vec<Int>, Rat)>> {
    if bound_sq.is_negative() {
        return Ok(Vec::new());
    }
    let n = gram.rows();
    let t = lll_transform(gram);
    let tr = t.to_rat();
    let reduced = tr.transpose().mul(gram).mul(&tr);
    let (l, d) = ldlt(&reduced).expect("gram must be PD");

    let mut out: Vec<(Vec<Int>, Rat)> = Vec::new();
    let mut x = vec![Int::zero(); n];
    enum_level(n, &l, &d, bound_sq, &mut x, n, &Rat::zero(), budget, &mut |x, len| {
        if x.iter().all(|v| v.is_zero()) {
            return;
        }
        let orig = t.mul_vec(x);
        let canon = canonical_sign(orig);
        out.push((canon, len.clone()));
    })?;

    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out.dedup();
    Ok(out)
}

fn canonical_sign(mut v: Vec<Int>) -> Vec<Int> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for e in v.iter_mut() {
                *e = -e.clone();
            }
        }
    }
    v
}

/// Recursive LDL^T enumeration over level = n-1 .. 0; at each level the
/// admissible integers form a contiguous range around the Babai center.
#[allow(clippy::too_many_arguments)]
fn enum_level(
    n: usize,
    l: &RatMatrix,
    d: &[Rat],
    bound: &Rat,
    x: &mut Vec<Int>,
    level: usize,
    used: &Rat,
    budget: &Budget,
    emit: &mut dyn FnMut(&[Int], &Rat),
) -> Result<()> {
    if level == 0 {
        emit(x, used);
        return Ok(());
    }
    let i = level - 1;
    // c_i = sum_{j>i} L[j][i] * x_j
    let mut c = Rat::zero();
    for j in i + 1..n {
        if !x[j].is_zero() {
            c += l.at(j, i) * Rat::from_integer(x[j].clone());
        }
    }
    let rem = bound - used;
    // admissible x_i: D_i (x_i + c)^2 <= rem
    let cond = |m: &Int| -> bool {
        let t = Rat::from_integer(m.clone()) + &c;
        &(&t * &t) * &d[i] <= rem
    };
    let center = (-c.clone()).floor().to_integer();
    let next = &center + Int::one();
    let anchor = if cond(&center) {
        Some(center.clone())
    } else if cond(&next) {
        Some(next.clone())
    } else {
        None
    };
    let Some(anchor) = anchor else {
        budget.charge(1)?;
        return Ok(());
    };
    let mut lo = anchor.clone();
    loop {
        let cand = &lo - Int::one();
        if cond(&cand) {
            lo = cand;
        } else {
            break;
        }
    }
    let mut hi = anchor;
    loop {
        let cand = &hi + Int::one();
        if cond(&cand) {
            hi = cand;
        } else {
            break;
        }
    }
    let mut m = lo;
    while m <= hi {
        budget.charge(1)?;
        let t = Rat::from_integer(m.clone()) + &c;
        let used2 = used + &(&t * &t) * &d[i];
        x[i] = m.clone();
        enum_level(n, l, d, bound, x, i, &used2, budget, emit)?;
        x[i] = Int::zero();
        m += Int::one();
    }
    Ok(())
}

/// Shortest nonzero vector in the Euclidean (Gram) metric: squared length
/// and a canonical witness.
pub fn euclid_min_sq(lat: &Lattice, budget: &Budget) -> Result<(Rat, Vec<Int>)> {
    euclid_min_sq_gram(lat.gram(), budget)
}

pub fn euclid_min_sq_gram(gram: &RatMatrix, budget: &Budget) -> Result<(Rat, Vec<Int>)> {
    let t = lll_transform(gram);
    let tr = t.to_rat();
    let reduced = tr.transpose().mul(gram).mul(&tr);
    let ub = (0..reduced.rows()).map(|i| reduced.at(i, i).clone()).min().unwrap();
    let list = enumerate_short_gram(gram, &ub, budget)?;
    let (v, len) = list.into_iter().next().expect("upper bound is attained");
    Ok((len, v))
}
