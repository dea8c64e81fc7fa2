//! The algorithmic core: shortest vectors under body gauges, successive
//! minima, lattice width, covering minima for boxes, KZ-reduced bases, and
//! the packing minima via complete lattice-plane enumeration.
//!
//! rho_i is the maximum of lambda_1(K_c|L^perp, Λ|L^perp) over saturated
//! rank-(n-i) planes L. Completeness of the plane search rests on two
//! certified facts about any plane strictly beating the champion value t:
//! it must contain every lattice vector of K_c-gauge at most t (such a
//! vector otherwise projects to something at least as short), and its
//! intersection determinant obeys a cap obtained from Minkowski's theorem
//! applied to the projected body (with a Hermite-constant variant for the
//! Euclidean side). Generators of capped planes are in turn bounded through
//! Minkowski's second theorem, so a finite certified candidate set remains
//! and every candidate is evaluated exactly.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::bodies::{difference_body, inradius_lb, polar_body, project_body, Body, SymBody};
use crate::lattices::{
    enumerate_short_gram, euclid_min_sq_gram, lll_transform, project_along, quad_form, saturate,
    Lattice, LatticeKind, LatticePlane, ProjectedLattice,
};
use crate::ratlin::{
    ball_volume_lb, hermite_pow_ub, int_sqrt_floor, is_perfect_square, sqrt_upper, Int, IntMatrix,
    Rat, RatMatrix,
};
use crate::{Budget, Ctx, Error, Result};

/// An exact value that is either rational or the square root of a positive
/// rational. Comparisons go through the squared form; a square root that
/// happens to be rational normalizes to `Exact` on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimaValue {
    Exact(Rat),
    SqrtOf(Rat),
}

impl MinimaValue {
    pub fn exact(q: Rat) -> Self {
        assert!(!q.is_negative());
        MinimaValue::Exact(q)
    }

    pub fn sqrt_of(q: Rat) -> Self {
        assert!(!q.is_negative());
        match is_perfect_square(&q) {
            Some(r) => MinimaValue::Exact(r),
            None => MinimaValue::SqrtOf(q),
        }
    }

    /// The squared value, always rational.
    pub fn sq(&self) -> Rat {
        match self {
            MinimaValue::Exact(q) => q * q,
            MinimaValue::SqrtOf(q) => q.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            MinimaValue::Exact(q) => MinimaValue::Exact(q.recip()),
            MinimaValue::SqrtOf(q) => MinimaValue::SqrtOf(q.recip()),
        }
    }

    /// Scale by a positive rational.
    pub fn scale(&self, c: &Rat) -> Self {
        assert!(c.is_positive());
        match self {
            MinimaValue::Exact(q) => MinimaValue::Exact(q * c),
            MinimaValue::SqrtOf(q) => MinimaValue::sqrt_of(q * c * c),
        }
    }

    /// floor(1/value + 1) = floor(1/value) + 1 by exact integer square root
    /// comparison on the squared value.
    pub fn floor_recip_plus_one(&self) -> Int {
        let inv_sq = self.sq().recip();
        let approx = inv_sq.floor().to_integer();
        let mut t = int_sqrt_floor(&approx);
        loop {
            let next = &t + Int::one();
            let nr = Rat::from_integer(next.clone());
            if &nr * &nr <= inv_sq {
                t = next;
            } else {
                break;
            }
        }
        t + Int::one()
    }
}

impl PartialOrd for MinimaValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinimaValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sq().cmp(&other.sq())
    }
}

/// Validate the body/lattice pairing: balls go with Gram-form lattices (or
/// the standard basis); polytope bodies go with Basis-kind lattices.
pub fn validate_pair(k: &Body, lat: &Lattice) -> Result<()> {
    match k {
        Body::Ball { .. } => match lat.kind() {
            LatticeKind::Gram(_) => Ok(()),
            LatticeKind::Basis(b) => {
                if b.is_identity_matrix() {
                    Ok(())
                } else {
                    Err(Error::IncompatibleKinds(
                        "ball bodies pair with Gram-form lattices or the standard basis".into(),
                    ))
                }
            }
        },
        _ => {
            if !lat.is_basis_kind() {
                return Err(Error::IncompatibleKinds(
                    "polytope bodies pair with Basis-kind lattices".into(),
                ));
            }
            if k.dim() != lat.dim() {
                return Err(Error::IncompatibleKinds("body/lattice dimension mismatch".into()));
            }
            Ok(())
        }
    }
}

/// A symmetric gauge paired with a lattice in integer coordinates: exact
/// gauge evaluation plus complete enumeration below a threshold.
pub(crate) struct GaugeSpace {
    gram: RatMatrix,
    kind: GaugeKind,
}

enum GaugeKind {
    /// gauge(x)^2 = x^T G x / radius_sq
    Ball { radius_sq: Rat },
    /// gauge(x) = max_i <rows_i, x> over sign-symmetric rows; axis_h bounds
    /// the unit gauge ball per coordinate axis for box enumeration.
    Poly { rows: RatMatrix, axis_h: Vec<Rat> },
}

impl GaugeSpace {
    /// Gauge of the symmetric body m with respect to the lattice.
    pub fn primal(m: &SymBody, lat: &Lattice) -> Result<GaugeSpace> {
        validate_pair(m.body(), lat)?;
        match m.body() {
            Body::Ball { radius } => Ok(GaugeSpace {
                gram: lat.gram().clone(),
                kind: GaugeKind::Ball { radius_sq: radius * radius },
            }),
            _ => {
                let n = lat.dim();
                let b = match lat.kind() {
                    LatticeKind::Basis(b) => b.clone(),
                    LatticeKind::Gram(_) => unreachable!("validated"),
                };
                let (a, rhs) = m.body().hrep()?;
                let mut rows = a.mul(&b);
                for i in 0..rows.rows() {
                    for j in 0..rows.cols() {
                        let v = rows.at(i, j) / &rhs[i];
                        *rows.at_mut(i, j) = v;
                    }
                }
                let binv_t = b.inverse().expect("invertible basis").transpose();
                let mut axis_h = Vec::with_capacity(n);
                for i in 0..n {
                    let dir: Vec<Rat> = (0..n).map(|r| binv_t.at(r, i).clone()).collect();
                    axis_h.push(m.body().support(&dir)?);
                }
                Ok(GaugeSpace { gram: lat.gram().clone(), kind: GaugeKind::Poly { rows, axis_h } })
            }
        }
    }

    /// Gauge of the projected body in the chart of a lattice projection.
    pub fn projected(m: &SymBody, proj: &ProjectedLattice) -> Result<GaugeSpace> {
        match m.body() {
            Body::Ball { radius } => Ok(GaugeSpace {
                gram: proj.gram.clone(),
                kind: GaugeKind::Ball { radius_sq: radius * radius },
            }),
            _ => {
                let chart_body = project_body(m, proj)?;
                let (a, rhs) = chart_body.body().hrep()?;
                let mut rows = a;
                for i in 0..rows.rows() {
                    for j in 0..rows.cols() {
                        let v = rows.at(i, j) / &rhs[i];
                        *rows.at_mut(i, j) = v;
                    }
                }
                let verts = chart_body.body().vertices().expect("projections carry a V-rep");
                let d = proj.gram.rows();
                let axis_h: Vec<Rat> = (0..d)
                    .map(|i| verts.iter().map(|v| v[i].clone()).max().expect("nonempty"))
                    .collect();
                Ok(GaugeSpace { gram: proj.gram.clone(), kind: GaugeKind::Poly { rows, axis_h } })
            }
        }
    }

    /// Gauge of the polar body K_c° with respect to the polar lattice:
    /// gauge(u) = h(K_c, u). Drives the lattice width and the dual
    /// successive minima.
    pub fn dual_support(kc: &SymBody, lat: &Lattice) -> Result<GaugeSpace> {
        let dual = lat.dual();
        match kc.body() {
            Body::Ball { radius } => {
                let r = radius.recip();
                Ok(GaugeSpace {
                    gram: dual.gram().clone(),
                    kind: GaugeKind::Ball { radius_sq: &r * &r },
                })
            }
            _ => {
                let b = lat.basis_matrix().ok_or_else(|| {
                    Error::IncompatibleKinds(
                        "polytope bodies pair with Basis-kind lattices".into(),
                    )
                })?;
                let verts = kc.body().vertices().ok_or(Error::UnsupportedRepresentation)?;
                let binv = b.inverse().expect("invertible basis");
                let rows =
                    RatMatrix::from_rows(verts.iter().map(|w| binv.mul_vec(w)).collect::<Vec<_>>());
                // |u_i| <= sqrt(u^T G* u * (G*^{-1})_ii) and gauge >= r_lb * |u|
                let r_lb = inradius_lb(kc)?;
                let circum_sq = (&r_lb * &r_lb).recip();
                let n = lat.dim();
                let gram_inv = dual.gram().inverse().expect("PD");
                let axis_h: Vec<Rat> =
                    (0..n).map(|i| sqrt_upper(&(&circum_sq * gram_inv.at(i, i)))).collect();
                Ok(GaugeSpace {
                    gram: dual.gram().clone(),
                    kind: GaugeKind::Poly { rows, axis_h },
                })
            }
        }
    }

    fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gauge(&self, x: &[Int]) -> MinimaValue {
        match &self.kind {
            GaugeKind::Ball { radius_sq } => {
                MinimaValue::sqrt_of(quad_form(&self.gram, x) / radius_sq)
            }
            GaugeKind::Poly { rows, .. } => {
                let mut best = Rat::zero();
                for i in 0..rows.rows() {
                    let mut s = Rat::zero();
                    for j in 0..rows.cols() {
                        if !x[j].is_zero() {
                            s += rows.at(i, j) * Rat::from_integer(x[j].clone());
                        }
                    }
                    if s > best {
                        best = s;
                    }
                }
                MinimaValue::Exact(best)
            }
        }
    }

    /// All nonzero vectors with gauge <= t, one per antipodal pair, sorted
    /// by (squared gauge, lexicographic coordinates).
    pub fn candidates_leq(
        &self,
        t: &MinimaValue,
        budget: &Budget,
    ) -> Result<Vec<(Vec<Int>, MinimaValue)>> {
        let mut out: Vec<(Vec<Int>, MinimaValue)> = Vec::new();
        match &self.kind {
            GaugeKind::Ball { radius_sq } => {
                let bound = t.sq() * radius_sq;
                for (v, len) in enumerate_short_gram(&self.gram, &bound, budget)? {
                    out.push((v, MinimaValue::sqrt_of(len / radius_sq)));
                }
            }
            GaugeKind::Poly { axis_h, .. } => {
                let MinimaValue::Exact(tval) = t else {
                    panic!("polytope gauges are exact rationals");
                };
                let n = self.dim();
                let ranges: Vec<i128> = axis_h
                    .iter()
                    .map(|h| {
                        let m = (h * tval).floor().to_integer();
                        i128::try_from(&m).expect("axis range fits i128")
                    })
                    .collect();
                let mut x = vec![Int::zero(); n];
                self.box_scan(&ranges, tval, &mut x, 0, budget, &mut out)?;
                out.sort_by(|a, b| a.1.sq().cmp(&b.1.sq()).then_with(|| a.0.cmp(&b.0)));
            }
        }
        Ok(out)
    }

    fn box_scan(
        &self,
        ranges: &[i128],
        t: &Rat,
        x: &mut Vec<Int>,
        level: usize,
        budget: &Budget,
        out: &mut Vec<(Vec<Int>, MinimaValue)>,
    ) -> Result<()> {
        if level == ranges.len() {
            budget.charge(1)?;
            // one representative per pair: first nonzero coordinate positive
            let Some(first) = x.iter().find(|v| !v.is_zero()) else {
                return Ok(());
            };
            if first.is_negative() {
                return Ok(());
            }
            let g = self.gauge(x);
            if g.sq() <= t * t {
                out.push((x.clone(), g));
            }
            return Ok(());
        }
        let r = ranges[level];
        let mut v = -r;
        while v <= r {
            x[level] = Int::from(v);
            self.box_scan(ranges, t, x, level + 1, budget, out)?;
            v += 1;
        }
        x[level] = Int::zero();
        Ok(())
    }

    /// Shortest nonzero vector in this gauge, with witness.
    pub fn shortest(&self, budget: &Budget) -> Result<(MinimaValue, Vec<Int>)> {
        let t = lll_transform(&self.gram);
        let t0 = (0..self.dim()).map(|j| self.gauge(&t.col(j))).min().expect("nonempty basis");
        let cands = self.candidates_leq(&t0, budget)?;
        let (v, g) = cands.into_iter().next().expect("upper bound attained");
        Ok((g, v))
    }

    /// Successive minima with a greedily selected independent witness set.
    pub fn successive(&self, budget: &Budget) -> Result<Vec<(MinimaValue, Vec<Int>)>> {
        let t = lll_transform(&self.gram);
        let t0 = (0..self.dim()).map(|j| self.gauge(&t.col(j))).max().expect("nonempty basis");
        let cands = self.candidates_leq(&t0, budget)?;
        let mut tracker = RankTracker::new(self.dim());
        let mut out = Vec::with_capacity(self.dim());
        for (v, g) in cands {
            if tracker.try_add(&v) {
                out.push((g, v));
                if out.len() == self.dim() {
                    break;
                }
            }
        }
        debug_assert_eq!(out.len(), self.dim(), "a reduced basis bounds all minima");
        Ok(out)
    }
}

/// Incremental rational rank tracking. Stored rows are kept mutually
/// reduced (each pivot column is zero in every other row), so one pass of
/// elimination decides membership in the span.
#[derive(Clone)]
struct RankTracker {
    dim: usize,
    rows: Vec<(usize, Vec<Rat>)>, // (pivot, normalized row)
}

impl RankTracker {
    fn new(dim: usize) -> Self {
        RankTracker { dim, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn try_add(&mut self, v: &[Int]) -> bool {
        let mut w: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        for (pivot, row) in &self.rows {
            if !w[*pivot].is_zero() {
                let f = w[*pivot].clone();
                for j in 0..self.dim {
                    let sub = &row[j] * &f;
                    w[j] -= sub;
                }
            }
        }
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let pv = w[pivot].clone();
        let norm: Vec<Rat> = w.iter().map(|x| x / &pv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for j in 0..self.dim {
                    let sub = &norm[j] * &f;
                    row[j] -= sub;
                }
            }
        }
        self.rows.push((pivot, norm));
        true
    }
}

/// lambda(M, Λ): shortest nontrivial lattice vector in the gauge of the
/// given origin-symmetric body (callers pass K_c, or any symmetric M).
pub fn shortest_vector(m: &SymBody, lat: &Lattice, ctx: &Ctx) -> Result<(MinimaValue, Vec<Int>)> {
    GaugeSpace::primal(m, lat)?.shortest(&ctx.budget)
}

/// lambda_1 <= ... <= lambda_n of the symmetric body m, with witnesses.
pub fn successive_minima(
    m: &SymBody,
    lat: &Lattice,
    ctx: &Ctx,
) -> Result<Vec<(MinimaValue, Vec<Int>)>> {
    GaugeSpace::primal(m, lat)?.successive(&ctx.budget)
}

/// lambda_i(K_c°, Λ*) for i = 1..n.
pub fn dual_successive_minima(
    k: &Body,
    lat: &Lattice,
    ctx: &Ctx,
) -> Result<Vec<(MinimaValue, Vec<Int>)>> {
    let kc = difference_body(k)?;
    GaugeSpace::dual_support(&kc, lat)?.successive(&ctx.budget)
}

/// Lattice width of K: min over nonzero polar lattice vectors v of
/// h(K, v) + h(K, -v) = h(K_c, v). Equals 1/rho_1.
pub fn lattice_width(k: &Body, lat: &Lattice, ctx: &Ctx) -> Result<(MinimaValue, Vec<Int>)> {
    let kc = difference_body(k)?;
    GaugeSpace::dual_support(&kc, lat)?.shortest(&ctx.budget)
}

/// Covering minima of the box C(r) with respect to Z^n: mu_1 = 1/width =
/// 1/(2 r_1) equals the covering radius, so the monotone squeeze forces
/// every mu_i to the same value.
pub fn covering_minima_box(r: &[Rat]) -> Result<Vec<Rat>> {
    if r.is_empty() || !r[0].is_positive() || r.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("box radii must be positive ascending".into()));
    }
    let mu = (Rat::from_integer(Int::from(2)) * &r[0]).recip();
    Ok(vec![mu; r.len()])
}

#[derive(Debug, Clone)]
pub struct PackingMinimum {
    pub index: usize,
    pub value: MinimaValue,
    pub plane: LatticePlane,
}

enum PlaneOutcome {
    Below,
    Tie,
    Above(MinimaValue),
}

fn projection_gauge_space(kc: &SymBody, lat: &Lattice, plane: &LatticePlane) -> Result<GaugeSpace> {
    let proj = project_along(lat, plane)?;
    GaugeSpace::projected(kc, &proj)
}

fn eval_plane_exact(
    kc: &SymBody,
    lat: &Lattice,
    plane: &LatticePlane,
    budget: &Budget,
) -> Result<MinimaValue> {
    let gs = projection_gauge_space(kc, lat, plane)?;
    Ok(gs.shortest(budget)?.0)
}

fn eval_plane_vs(
    kc: &SymBody,
    lat: &Lattice,
    plane: &LatticePlane,
    champ: &MinimaValue,
    budget: &Budget,
) -> Result<PlaneOutcome> {
    let gs = projection_gauge_space(kc, lat, plane)?;
    let cands = gs.candidates_leq(champ, budget)?;
    match cands.first() {
        None => Ok(PlaneOutcome::Above(gs.shortest(budget)?.0)),
        Some((_, g)) => {
            if g.sq() < champ.sq() {
                Ok(PlaneOutcome::Below)
            } else {
                Ok(PlaneOutcome::Tie)
            }
        }
    }
}

/// Squared determinant cap: a plane whose projected lambda_1 exceeds the
/// champion gauge t must satisfy detSq(Λ'∩L') <= cap. Minimum of the
/// volumetric bound 4^i detSq / (r^{2i} vol(B_i)^2 t^{2i}) and the
/// Hermite-constant bound detSq gamma_i^i / (t^2 s)^i, where s converts
/// gauge to Euclidean length (the body radius for balls, the certified
/// inradius for polytopes).
fn det_cap_sq(kc: &SymBody, i: usize, champ_sq: &Rat, work_det_sq: &Rat, r_lb: &Rat) -> Rat {
    let vol = ball_volume_lb(i);
    let r_sq = r_lb * r_lb;
    let mut denom = &vol * &vol;
    let mut four_i = Rat::one();
    let mut champ_pow = Rat::one();
    for _ in 0..i {
        denom *= &r_sq;
        four_i *= Rat::from_integer(Int::from(4));
        champ_pow *= champ_sq;
    }
    let volumetric = four_i * work_det_sq / (&denom * &champ_pow);

    let scale_sq = match kc.body() {
        Body::Ball { radius } => radius * radius,
        _ => r_lb * r_lb,
    };
    let gam = hermite_pow_ub(i);
    let base = champ_sq * &scale_sq;
    let mut denom2 = Rat::one();
    for _ in 0..i {
        denom2 *= &base;
    }
    let hermite = work_det_sq * gam / denom2;

    volumetric.min(hermite)
}

/// All full-rank k-subsets of the ascending vector list whose squared-length
/// product stays below the Minkowski cap.
fn scan_subsets(
    vectors: &[(Vec<Int>, Rat)],
    k: usize,
    prod_cap: &Rat,
    e1_sq: &Rat,
    emit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        vectors: &[(Vec<Int>, Rat)],
        k: usize,
        prod_cap: &Rat,
        e1_sq: &Rat,
        start: usize,
        chosen: &mut Vec<usize>,
        prod: &Rat,
        tracker: &RankTracker,
        emit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if chosen.len() == k {
            return emit(chosen);
        }
        let remaining = k - chosen.len();
        for idx in start..vectors.len() {
            let (v, len_sq) = &vectors[idx];
            // remaining picks are no shorter than e1; the list ascends, so
            // once this fails it fails for every later index too
            let mut min_total = prod * len_sq;
            for _ in 1..remaining {
                min_total *= e1_sq;
            }
            if min_total > *prod_cap {
                break;
            }
            let mut t2 = tracker.clone();
            if !t2.try_add(v) {
                continue;
            }
            chosen.push(idx);
            let prod2 = prod * len_sq;
            rec(vectors, k, prod_cap, e1_sq, idx + 1, chosen, &prod2, &t2, emit)?;
            chosen.pop();
        }
        Ok(())
    }
    let dim = vectors.first().map(|(v, _)| v.len()).unwrap_or(0);
    let tracker = RankTracker::new(dim);
    rec(vectors, k, prod_cap, e1_sq, 0, &mut Vec::new(), &Rat::one(), &tracker, emit)
}

/// rho_i(K, Λ): the exact value together with an attaining plane. Among
/// attaining planes inside the certified candidate set, the one with the
/// lexicographically smallest HNF key is reported.
pub fn packing_minima(k: &Body, lat: &Lattice, index: usize, ctx: &Ctx) -> Result<PackingMinimum> {
    validate_pair(k, lat)?;
    let n = lat.dim();
    if index == 0 || index > n {
        return Err(Error::RankOutOfRange(index));
    }
    let kc = difference_body(k)?;
    if index == n {
        let (value, _) = shortest_vector(&kc, lat, ctx)?;
        return Ok(PackingMinimum { index, value, plane: LatticePlane::trivial(n) });
    }
    let kk = n - index; // plane rank

    let parent_gauge = GaugeSpace::primal(&kc, lat)?;
    let r_lb = inradius_lb(&kc)?;

    // Seeds: every rank-kk plane spanned by a subset of an LLL-reduced basis.
    let t = lll_transform(lat.gram());
    let mut champ: Option<(MinimaValue, LatticePlane)> = None;
    let mut seen: HashSet<Vec<Int>> = HashSet::new();
    let mut seed_planes = Vec::new();
    subsets_of_basis(n, kk, &mut |subset| {
        let cols: Vec<Vec<Int>> = subset.iter().map(|&j| t.col(j)).collect();
        let plane = saturate(lat, &IntMatrix::from_cols(cols))?;
        if seen.insert(plane.key()) {
            seed_planes.push(plane);
        }
        Ok(())
    })?;
    for plane in seed_planes {
        let value = eval_plane_exact(&kc, lat, &plane, &ctx.budget)?;
        consider(&mut champ, value, plane);
    }

    loop {
        let champ_value = champ.as_ref().expect("seeded").0.clone();

        // Vectors of gauge <= champion span a subspace every strictly
        // better plane must contain.
        let weak = parent_gauge.candidates_leq(&champ_value, &ctx.budget)?;
        let mut tracker = RankTracker::new(n);
        let mut span_vecs: Vec<Vec<Int>> = Vec::new();
        for (v, _) in &weak {
            if tracker.try_add(v) {
                span_vecs.push(v.clone());
                if tracker.rank() > kk {
                    break;
                }
            }
        }
        if tracker.rank() > kk {
            break; // no plane can strictly beat the champion
        }
        let d0 = tracker.rank();

        let improved = if d0 == kk && d0 > 0 {
            // the forced span is the only possible strictly better plane
            let plane = saturate(lat, &IntMatrix::from_cols(span_vecs.clone()))?;
            let mut better = false;
            if seen.insert(plane.key()) {
                let value = eval_plane_exact(&kc, lat, &plane, &ctx.budget)?;
                if value.sq() > champ_value.sq() {
                    better = true;
                }
                consider(&mut champ, value, plane);
            }
            better
        } else {
            // work in the projection along the forced span (identity when
            // d0 = 0) and enumerate candidate generators there
            let k2 = kk - d0;
            let (work_gram, lift): (RatMatrix, Option<(LatticePlane, IntMatrix)>) = if d0 == 0 {
                (lat.gram().clone(), None)
            } else {
                let l0 = saturate(lat, &IntMatrix::from_cols(span_vecs.clone()))?;
                let proj = project_along(lat, &l0)?;
                (proj.gram.clone(), Some((l0, proj.lift_coords.clone())))
            };
            let work_det_sq = work_gram.det();
            let cap = det_cap_sq(&kc, index, &champ_value.sq(), &work_det_sq, &r_lb);
            let (e1_sq, _) = euclid_min_sq_gram(&work_gram, &ctx.budget)?;
            let prod_cap = hermite_pow_ub(k2) * &cap;
            let mut m_cap = prod_cap.clone();
            for _ in 1..k2 {
                m_cap /= &e1_sq;
            }
            if m_cap < e1_sq {
                break; // no admissible generators at all
            }
            let vectors = enumerate_short_gram(&work_gram, &m_cap, &ctx.budget)?;

            let mut planes: Vec<LatticePlane> = Vec::new();
            let mut work_seen: HashSet<Vec<Int>> = HashSet::new();
            let work_lat = Lattice::from_gram(work_gram.clone())?;
            scan_subsets(&vectors, k2, &prod_cap, &e1_sq, &mut |subset| {
                let cols: Vec<Vec<Int>> = subset.iter().map(|&i| vectors[i].0.clone()).collect();
                let wplane = saturate(&work_lat, &IntMatrix::from_cols(cols))?;
                if *wplane.det_squared() > cap {
                    return Ok(());
                }
                if !work_seen.insert(wplane.key()) {
                    return Ok(());
                }
                let mut parent_cols: Vec<Vec<Int>> = Vec::new();
                if let Some((l0, lift_coords)) = &lift {
                    for j in 0..l0.basis().cols() {
                        parent_cols.push(l0.basis().col(j));
                    }
                    for j in 0..wplane.basis().cols() {
                        parent_cols.push(lift_coords.mul_vec(&wplane.basis().col(j)));
                    }
                } else {
                    for j in 0..wplane.basis().cols() {
                        parent_cols.push(wplane.basis().col(j));
                    }
                }
                let plane = saturate(lat, &IntMatrix::from_cols(parent_cols))?;
                if seen.insert(plane.key()) {
                    planes.push(plane);
                }
                Ok(())
            })?;

            let outcomes = parallel_eval(&kc, lat, &planes, &champ_value, ctx)?;
            let mut better = false;
            for (plane, outcome) in planes.into_iter().zip(outcomes) {
                match outcome {
                    PlaneOutcome::Below => {}
                    PlaneOutcome::Tie => {
                        consider(&mut champ, champ_value.clone(), plane);
                    }
                    PlaneOutcome::Above(value) => {
                        better = true;
                        consider(&mut champ, value, plane);
                    }
                }
            }
            better
        };

        if !improved {
            break;
        }
    }

    let (value, plane) = champ.expect("seeded");
    Ok(PackingMinimum { index, value, plane })
}

/// All packing minima rho_1 .. rho_n.
pub fn packing_minima_all(k: &Body, lat: &Lattice, ctx: &Ctx) -> Result<Vec<PackingMinimum>> {
    (1..=lat.dim()).map(|i| packing_minima(k, lat, i, ctx)).collect()
}

fn consider(
    champ: &mut Option<(MinimaValue, LatticePlane)>,
    value: MinimaValue,
    plane: LatticePlane,
) {
    match champ {
        None => *champ = Some((value, plane)),
        Some((cv, cp)) => {
            let vs = value.sq();
            let cs = cv.sq();
            if vs > cs || (vs == cs && plane.key() < cp.key()) {
                *champ = Some((value, plane));
            }
        }
    }
}

fn subsets_of_basis(n: usize, k: usize, emit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if cur.len() == k {
            return emit(cur);
        }
        let needed = k - cur.len();
        for i in start..=(n - needed) {
            cur.push(i);
            rec(i + 1, n, k, cur, emit)?;
            cur.pop();
        }
        Ok(())
    }
    if k == 0 || k > n {
        return Ok(());
    }
    rec(0, n, k, &mut Vec::new(), emit)
}

/// Evaluate candidate planes against a snapshot champion on a scoped worker
/// pool. Results are collected in input order, so the outcome is identical
/// for every thread count.
fn parallel_eval(
    kc: &SymBody,
    lat: &Lattice,
    planes: &[LatticePlane],
    champ: &MinimaValue,
    ctx: &Ctx,
) -> Result<Vec<PlaneOutcome>> {
    if ctx.threads <= 1 || planes.len() < 2 {
        return planes.iter().map(|p| eval_plane_vs(kc, lat, p, champ, &ctx.budget)).collect();
    }
    let chunk = planes.len().div_ceil(ctx.threads);
    let mut results: Vec<Result<Vec<PlaneOutcome>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for part in planes.chunks(chunk) {
            handles.push(scope.spawn(move || {
                part.iter()
                    .map(|p| eval_plane_vs(kc, lat, p, champ, &ctx.budget))
                    .collect::<Result<Vec<_>>>()
            }));
        }
        for h in handles {
            results.push(h.join().expect("worker panicked"));
        }
    });
    let mut out = Vec::with_capacity(planes.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Korkine-Zolotarev reduced basis with respect to the symmetric body m:
/// columns b_1..b_n with each projected b_i shortest in the correspondingly
/// projected lattice; returns the basis and its gauge sequence.
pub fn kz_basis(m: &SymBody, lat: &Lattice, ctx: &Ctx) -> Result<(IntMatrix, Vec<MinimaValue>)> {
    let n = lat.dim();
    if n > 5 {
        return Err(Error::DimensionTooLarge(n));
    }
    let (g1, b1) = shortest_vector(m, lat, ctx)?;
    let mut cols: Vec<Vec<Int>> = vec![b1];
    let mut gauges = vec![g1];
    for _ in 1..n {
        let plane = saturate(lat, &IntMatrix::from_cols(cols.clone()))?;
        let proj = project_along(lat, &plane)?;
        let gs = GaugeSpace::projected(m, &proj)?;
        let (g, y) = gs.shortest(&ctx.budget)?;
        cols.push(proj.lift_coords.mul_vec(&y));
        gauges.push(g);
    }
    Ok((IntMatrix::from_cols(cols), gauges))
}

/// Prop 1.1 data: 1/lambda_i(K_c°, Λ*) <= rho_i <= lambda_{n-i+1}(K_c, Λ),
/// with equality at i = 1 below and i = n above.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub lower: Vec<MinimaValue>,
    pub packing: Vec<MinimaValue>,
    pub upper: Vec<MinimaValue>,
    pub ok: bool,
    pub equality_at_1: bool,
    pub equality_at_n: bool,
}

pub fn verify_sandwich(k: &Body, lat: &Lattice, ctx: &Ctx) -> Result<SandwichReport> {
    let n = lat.dim();
    let kc = difference_body(k)?;
    let successive: Vec<MinimaValue> =
        successive_minima(&kc, lat, ctx)?.into_iter().map(|(g, _)| g).collect();
    let dual: Vec<MinimaValue> =
        dual_successive_minima(k, lat, ctx)?.into_iter().map(|(g, _)| g).collect();
    let packing: Vec<MinimaValue> =
        packing_minima_all(k, lat, ctx)?.into_iter().map(|p| p.value).collect();
    let lower: Vec<MinimaValue> = dual.iter().map(|v| v.recip()).collect();
    let upper: Vec<MinimaValue> = (0..n).map(|i| successive[n - 1 - i].clone()).collect();
    let mut ok = true;
    for i in 0..n {
        if !(lower[i].sq() <= packing[i].sq() && packing[i].sq() <= upper[i].sq()) {
            ok = false;
        }
    }
    let equality_at_1 = lower[0].sq() == packing[0].sq();
    let equality_at_n = packing[n - 1].sq() == upper[n - 1].sq();
    Ok(SandwichReport { lower, packing, upper, ok, equality_at_1, equality_at_n })
}

/// The maximal strictly decreasing subsequence construction: j_m is the
/// largest j < n with rho_j > rho_n, then j_{t-1} the largest j < j_t with
/// rho_j > rho_{j_t}. Returns 1-based indices; empty when no rho_j exceeds
/// rho_n.
pub fn decreasing_subsequence(rho: &[MinimaValue]) -> Vec<usize> {
    let n = rho.len();
    if n == 0 {
        return Vec::new();
    }
    let mut indices = Vec::new();
    let mut cur = n - 1;
    while let Some(j) = (0..cur).rev().find(|&j| rho[j].sq() > rho[cur].sq()) {
        indices.push(j + 1);
        cur = j;
    }
    indices.reverse();
    indices
}

/// Conjectured transference product rho_j(K,Λ)^2 * rho_{n-j+1}(K_c°,Λ*)^2
/// and whether it is >= 1/4 (the squared form of >= 1/2). Report-only.
pub fn transference_probe(k: &Body, lat: &Lattice, j: usize, ctx: &Ctx) -> Result<(Rat, bool)> {
    let n = lat.dim();
    if j == 0 || j > n {
        return Err(Error::RankOutOfRange(j));
    }
    let rho_j = packing_minima(k, lat, j, ctx)?.value;
    let kc = difference_body(k)?;
    let polar = polar_body(&kc)?;
    let dual = lat.dual();
    let rho_dual = packing_minima(&polar.into_body(), &dual, n - j + 1, ctx)?.value;
    let prod = rho_j.sq() * rho_dual.sq();
    let quarter = Rat::new(Int::one(), Int::from(4));
    let ok = prod >= quarter;
    Ok((prod, ok))
}

/// Aggregate of all the minima functionals for one instance.
#[derive(Debug, Clone)]
pub struct MinimaReport {
    pub successive: Vec<MinimaValue>,
    pub successive_witnesses: Vec<Vec<Int>>,
    pub dual_successive: Vec<MinimaValue>,
    pub packing: Vec<PackingMinimum>,
    pub width: MinimaValue,
    pub width_witness: Vec<Int>,
    /// Covering minima where a closed form is forced (boxes over Z^n).
    pub covering: Option<Vec<Rat>>,
}

pub fn minima_report(k: &Body, lat: &Lattice, ctx: &Ctx) -> Result<MinimaReport> {
    let kc = difference_body(k)?;
    let succ = successive_minima(&kc, lat, ctx)?;
    let (successive, successive_witnesses): (Vec<_>, Vec<_>) = succ.into_iter().unzip();
    let dual_successive =
        dual_successive_minima(k, lat, ctx)?.into_iter().map(|(g, _)| g).collect();
    let packing = packing_minima_all(k, lat, ctx)?;
    let (width, width_witness) = lattice_width(k, lat, ctx)?;
    let covering = match (k, lat.basis_matrix()) {
        (Body::Box { r }, Some(b)) if b.is_identity_matrix() => Some(covering_minima_box(r)?),
        _ => None,
    };
    Ok(MinimaReport {
        successive,
        successive_witnesses,
        dual_successive,
        packing,
        width,
        width_witness,
        covering,
    })
}
