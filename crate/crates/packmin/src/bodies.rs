//! Convex bodies with exact norm (gauge), support, polar, difference-body,
//! inradius-lower-bound and volume semantics.
//!
//! Family kinds (boxes, crosspolytopes, balls) have closed forms in every
//! dimension; generic V/H-polytopes get facet/vertex conversion and
//! triangulated volume in dimension <= 4, which is all the generic instances
//! ever need.

use num_traits::{One, Signed, Zero};

use crate::lattices::ProjectedLattice;
use crate::ratlin::{
    kernel_basis, solve_standard_lp, sqrt_lower, Int, LpOutcome, Rat, RatMatrix,
};
use crate::{Error, Result};

pub type Point = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    /// [-r_1, r_1] x ... x [-r_n, r_n] with 0 < r_1 <= ... <= r_n.
    Box { r: Vec<Rat> },
    /// conv{ +-e_i / r_i }.
    CrossPolytope { r: Vec<Rat> },
    /// n+1 affinely independent vertices.
    Simplex { vertices: Vec<Point> },
    VPolytope { vertices: Vec<Point> },
    /// { x : A x <= b }, bounded with nonempty interior.
    HPolytope { a: RatMatrix, b: Vec<Rat> },
    /// Euclidean ball; pairs with Gram-form lattices (or the standard basis).
    Ball { radius: Rat },
}

impl Body {
    pub fn make_box(r: Vec<Rat>) -> Result<Body> {
        if r.is_empty() {
            return Err(Error::InvalidParams("box needs at least one radius".into()));
        }
        if !r[0].is_positive() {
            return Err(Error::InvalidParams("box radii must be positive".into()));
        }
        if r.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParams("box radii must be sorted ascending".into()));
        }
        Ok(Body::Box { r })
    }

    pub fn make_crosspolytope(r: Vec<Rat>) -> Result<Body> {
        if r.is_empty() || r.iter().any(|v| !v.is_positive()) {
            return Err(Error::InvalidParams("crosspolytope radii must be positive".into()));
        }
        Ok(Body::CrossPolytope { r })
    }

    pub fn make_ball(radius: Rat) -> Result<Body> {
        if !radius.is_positive() {
            return Err(Error::InvalidParams("ball radius must be positive".into()));
        }
        Ok(Body::Ball { radius })
    }

    pub fn make_simplex(vertices: Vec<Point>) -> Result<Body> {
        let n = vertices.first().map(|v| v.len()).unwrap_or(0);
        if n == 0 || vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidParams("simplex needs n+1 vertices in dimension n".into()));
        }
        if affine_rank(&vertices) != n {
            return Err(Error::InvalidParams("simplex vertices are affinely dependent".into()));
        }
        Ok(Body::Simplex { vertices })
    }

    pub fn make_vpolytope(vertices: Vec<Point>) -> Result<Body> {
        let n = vertices.first().map(|v| v.len()).unwrap_or(0);
        if n == 0 || vertices.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidParams("vertex dimensions inconsistent".into()));
        }
        if affine_rank(&vertices) != n {
            return Err(Error::InvalidParams("polytope is not full-dimensional".into()));
        }
        Ok(Body::VPolytope { vertices })
    }

    pub fn make_hpolytope(a: RatMatrix, b: Vec<Rat>) -> Result<Body> {
        if a.rows() == 0 || a.rows() != b.len() || a.cols() == 0 {
            return Err(Error::InvalidParams("constraint dimensions inconsistent".into()));
        }
        let body = Body::HPolytope { a, b };
        // bounded iff every coordinate direction has finite support
        let n = body.dim();
        for i in 0..n {
            for sign in [1i64, -1] {
                let mut u = vec![Rat::zero(); n];
                u[i] = Rat::from_integer(Int::from(sign));
                if body.support(&u).is_err() {
                    return Err(Error::InvalidParams("H-polytope is unbounded".into()));
                }
            }
        }
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Box { r } | Body::CrossPolytope { r } => r.len(),
            Body::Simplex { vertices } | Body::VPolytope { vertices } => vertices[0].len(),
            Body::HPolytope { a, .. } => a.cols(),
            Body::Ball { .. } => panic!("ball dimension comes from the paired lattice"),
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, Body::Ball { .. })
    }

    /// Vertex representation, when available without conversion.
    pub fn vertices(&self) -> Option<Vec<Point>> {
        match self {
            Body::Box { r } => {
                let n = r.len();
                let mut out = Vec::with_capacity(1 << n);
                for mask in 0u32..(1 << n) {
                    let v: Point = (0..n)
                        .map(|i| if mask >> i & 1 == 1 { -r[i].clone() } else { r[i].clone() })
                        .collect();
                    out.push(v);
                }
                Some(out)
            }
            Body::CrossPolytope { r } => {
                let n = r.len();
                let mut out = Vec::with_capacity(2 * n);
                for i in 0..n {
                    for sign in [1i64, -1] {
                        let mut v = vec![Rat::zero(); n];
                        v[i] = Rat::from_integer(Int::from(sign)) / &r[i];
                        out.push(v);
                    }
                }
                Some(out)
            }
            Body::Simplex { vertices } | Body::VPolytope { vertices } => Some(vertices.clone()),
            Body::HPolytope { .. } | Body::Ball { .. } => None,
        }
    }

    /// Halfspace representation. Generic V-polytopes convert in dim <= 4.
    pub fn hrep(&self) -> Result<(RatMatrix, Vec<Rat>)> {
        match self {
            Body::Box { r } => {
                let n = r.len();
                let mut rows = Vec::new();
                let mut b = Vec::new();
                for i in 0..n {
                    for sign in [1i64, -1] {
                        let mut row = vec![Rat::zero(); n];
                        row[i] = Rat::from_integer(Int::from(sign));
                        rows.push(row);
                        b.push(r[i].clone());
                    }
                }
                Ok((RatMatrix::from_rows(rows), b))
            }
            Body::CrossPolytope { r } => {
                let n = r.len();
                let mut rows = Vec::new();
                let mut b = Vec::new();
                for mask in 0u32..(1 << n) {
                    let row: Vec<Rat> = (0..n)
                        .map(|i| if mask >> i & 1 == 1 { -r[i].clone() } else { r[i].clone() })
                        .collect();
                    rows.push(row);
                    b.push(Rat::one());
                }
                Ok((RatMatrix::from_rows(rows), b))
            }
            Body::HPolytope { a, b } => Ok((a.clone(), b.clone())),
            Body::Simplex { vertices } | Body::VPolytope { vertices } => {
                let n = vertices[0].len();
                if n > 4 {
                    return Err(Error::DimensionTooLarge(n));
                }
                facet_enumeration(vertices)
            }
            Body::Ball { .. } => Err(Error::UnsupportedRepresentation),
        }
    }

    /// Support function h(K, u) = max_{x in K} <u, x>.
    pub fn support(&self, u: &[Rat]) -> Result<Rat> {
        match self {
            Body::Box { r } => Ok(r.iter().zip(u).map(|(ri, ui)| ri * ui.clone().abs()).sum()),
            Body::CrossPolytope { r } => {
                Ok(r.iter().zip(u).map(|(ri, ui)| ui.clone().abs() / ri).max().expect("nonempty"))
            }
            Body::Simplex { vertices } | Body::VPolytope { vertices } => {
                Ok(vertices.iter().map(|v| dot(v, u)).max().expect("nonempty"))
            }
            Body::HPolytope { a, b } => {
                // max u.x st Ax <= b, via x = p - q and slacks
                let m = a.rows();
                let n = a.cols();
                let mut rows = Vec::with_capacity(m);
                for i in 0..m {
                    let mut row = Vec::with_capacity(2 * n + m);
                    for j in 0..n {
                        row.push(a.at(i, j).clone());
                    }
                    for j in 0..n {
                        row.push(-a.at(i, j).clone());
                    }
                    for j in 0..m {
                        row.push(if i == j { Rat::one() } else { Rat::zero() });
                    }
                    rows.push(row);
                }
                let mut c = Vec::with_capacity(2 * n + m);
                for j in 0..n {
                    c.push(-u[j].clone());
                }
                for j in 0..n {
                    c.push(u[j].clone());
                }
                c.extend(std::iter::repeat(Rat::zero()).take(m));
                match solve_standard_lp(&RatMatrix::from_rows(rows), b, &c) {
                    LpOutcome::Optimal { value, .. } => Ok(-value),
                    LpOutcome::Unbounded => Err(Error::InvalidParams("unbounded support".into())),
                    LpOutcome::Infeasible => Err(Error::InvalidParams("empty H-polytope".into())),
                }
            }
            Body::Ball { .. } => Err(Error::UnsupportedRepresentation),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        match self {
            Body::Box { r } => Ok(x.iter().zip(r).all(|(xi, ri)| xi.clone().abs() <= *ri)),
            Body::CrossPolytope { r } => {
                let s: Rat = x.iter().zip(r).map(|(xi, ri)| xi.clone().abs() * ri).sum();
                Ok(s <= Rat::one())
            }
            Body::Ball { radius } => {
                let s: Rat = x.iter().map(|v| v * v).sum();
                Ok(s <= radius * radius)
            }
            Body::HPolytope { a, b } => Ok((0..a.rows()).all(|i| {
                let s: Rat = (0..a.cols()).map(|j| a.at(i, j) * &x[j]).sum();
                s <= b[i]
            })),
            Body::Simplex { vertices } | Body::VPolytope { vertices } => {
                let n = vertices[0].len();
                if n <= 4 {
                    let (a, b) = facet_enumeration(vertices)?;
                    Ok((0..a.rows()).all(|i| {
                        let s: Rat = (0..a.cols()).map(|j| a.at(i, j) * &x[j]).sum();
                        s <= b[i]
                    }))
                } else {
                    Ok(in_convex_hull(vertices, x))
                }
            }
        }
    }

    /// Exact Lebesgue volume. Closed forms for the family kinds in every
    /// dimension; generic polytopes by fan triangulation in dim <= 4.
    pub fn volume(&self) -> Result<Rat> {
        match self {
            Body::Box { r } => {
                let mut v = Rat::one();
                for ri in r {
                    v *= Rat::from_integer(Int::from(2)) * ri;
                }
                Ok(v)
            }
            Body::CrossPolytope { r } => {
                let n = r.len();
                let mut v = Rat::from_integer(Int::from(2u32).pow(n as u32));
                v /= Rat::from_integer(factorial(n));
                for ri in r {
                    v /= ri;
                }
                Ok(v)
            }
            Body::Simplex { vertices } => {
                let n = vertices[0].len();
                let mut m = RatMatrix::zero(n, n);
                for j in 1..=n {
                    for i in 0..n {
                        *m.at_mut(i, j - 1) = &vertices[j][i] - &vertices[0][i];
                    }
                }
                Ok(m.det().abs() / Rat::from_integer(factorial(n)))
            }
            Body::VPolytope { vertices } => {
                let n = vertices[0].len();
                if n > 4 {
                    return Err(Error::DimensionTooLarge(n));
                }
                polytope_volume(vertices)
            }
            Body::HPolytope { a, b } => {
                let n = a.cols();
                if n > 4 {
                    return Err(Error::DimensionTooLarge(n));
                }
                let verts = vertex_enumeration(a, b)?;
                polytope_volume(&verts)
            }
            Body::Ball { .. } => Err(Error::UnsupportedRepresentation),
        }
    }

    /// Dilation by a positive rational factor.
    pub fn scale(&self, c: &Rat) -> Body {
        assert!(c.is_positive());
        match self {
            Body::Box { r } => Body::Box { r: r.iter().map(|v| v * c).collect() },
            Body::CrossPolytope { r } => {
                Body::CrossPolytope { r: r.iter().map(|v| v / c).collect() }
            }
            Body::Ball { radius } => Body::Ball { radius: radius * c },
            Body::Simplex { vertices } => Body::Simplex {
                vertices: vertices.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
            },
            Body::VPolytope { vertices } => Body::VPolytope {
                vertices: vertices.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
            },
            Body::HPolytope { a, b } => {
                Body::HPolytope { a: a.clone(), b: b.iter().map(|v| v * c).collect() }
            }
        }
    }
}

fn factorial(n: usize) -> Int {
    let mut f = Int::one();
    for k in 2..=n {
        f *= Int::from(k);
    }
    f
}

/// A body certified origin-symmetric at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymBody(Body);

impl SymBody {
    pub fn certify(body: Body) -> Result<SymBody> {
        let ok = match &body {
            Body::Box { .. } | Body::CrossPolytope { .. } | Body::Ball { .. } => true,
            Body::Simplex { .. } => false,
            Body::VPolytope { vertices } => vertices.iter().all(|v| {
                let neg: Point = v.iter().map(|x| -x.clone()).collect();
                vertices.contains(&neg)
            }),
            Body::HPolytope { a, b } => (0..a.rows()).all(|i| {
                let neg: Vec<Rat> = (0..a.cols()).map(|j| -a.at(i, j).clone()).collect();
                (0..a.rows())
                    .any(|k| b[k] == b[i] && (0..a.cols()).all(|j| *a.at(k, j) == neg[j]))
            }),
        };
        if ok {
            Ok(SymBody(body))
        } else {
            Err(Error::InvalidParams("body is not origin-symmetric".into()))
        }
    }

    pub fn body(&self) -> &Body {
        &self.0
    }

    pub fn into_body(self) -> Body {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn scale(&self, c: &Rat) -> SymBody {
        SymBody(self.0.scale(c))
    }
}

/// K_c = K - K. Equals 2K for origin-symmetric K; V-representation bodies
/// get the pairwise vertex differences (pruned to extreme points in
/// dim <= 4, kept redundant above).
pub fn difference_body(k: &Body) -> Result<SymBody> {
    let two = Rat::from_integer(Int::from(2));
    match k {
        Body::Box { r } => Ok(SymBody(Body::Box { r: r.iter().map(|v| v * &two).collect() })),
        Body::CrossPolytope { r } => {
            Ok(SymBody(Body::CrossPolytope { r: r.iter().map(|v| v / &two).collect() }))
        }
        Body::Ball { radius } => Ok(SymBody(Body::Ball { radius: radius * &two })),
        Body::Simplex { vertices } | Body::VPolytope { vertices } => {
            let n = vertices[0].len();
            let mut diffs: Vec<Point> = Vec::new();
            for v in vertices {
                for w in vertices {
                    let d: Point = v.iter().zip(w).map(|(a, b)| a - b).collect();
                    if !diffs.contains(&d) {
                        diffs.push(d);
                    }
                }
            }
            let verts = if n <= 4 { extreme_points(&diffs) } else { diffs };
            SymBody::certify(Body::VPolytope { vertices: verts })
        }
        Body::HPolytope { a, b } => {
            let n = a.cols();
            if n > 4 {
                return Err(Error::UnsupportedRepresentation);
            }
            let verts = vertex_enumeration(a, b)?;
            difference_body(&Body::VPolytope { vertices: verts })
        }
    }
}

/// Polar body of an origin-symmetric body with 0 in its interior.
pub fn polar_body(k: &SymBody) -> Result<SymBody> {
    match k.body() {
        Body::Box { r } => Ok(SymBody(Body::CrossPolytope { r: r.clone() })),
        Body::CrossPolytope { r } => Ok(SymBody(Body::Box { r: r.clone() })),
        Body::Ball { radius } => Ok(SymBody(Body::Ball { radius: radius.recip() })),
        Body::VPolytope { vertices } => {
            // polar of conv(W) = { y : <w, y> <= 1 for all w }
            let rows = RatMatrix::from_rows(vertices.clone());
            let b = vec![Rat::one(); vertices.len()];
            SymBody::certify(Body::HPolytope { a: rows, b })
        }
        Body::HPolytope { a, b } => {
            if b.iter().any(|v| !v.is_positive()) {
                return Err(Error::OriginNotInterior);
            }
            let verts: Vec<Point> = (0..a.rows())
                .map(|i| (0..a.cols()).map(|j| a.at(i, j) / &b[i]).collect())
                .collect();
            SymBody::certify(Body::VPolytope { vertices: verts })
        }
        Body::Simplex { .. } => Err(Error::UnsupportedRepresentation),
    }
}

/// Gauge ("norm") of x with respect to an origin-symmetric body: the least
/// r >= 0 with x in rK. Closed forms for boxes and crosspolytopes; the
/// H-representation maximum of <a_i, x>/b_i clipped at 0; an exact simplex
/// LP (Bland's rule) for plain V-representations.
pub fn norm(k: &SymBody, x: &[Rat]) -> Result<Rat> {
    match k.body() {
        Body::Box { r } => {
            Ok(x.iter().zip(r).map(|(xi, ri)| xi.clone().abs() / ri).max().expect("nonempty"))
        }
        Body::CrossPolytope { r } => {
            Ok(x.iter().zip(r).map(|(xi, ri)| xi.clone().abs() * ri).sum())
        }
        Body::HPolytope { a, b } => {
            if b.iter().any(|v| !v.is_positive()) {
                return Err(Error::OriginNotInterior);
            }
            let mut best = Rat::zero();
            for i in 0..a.rows() {
                let s: Rat = (0..a.cols()).map(|j| a.at(i, j) * &x[j]).sum();
                let v = s / &b[i];
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        }
        Body::VPolytope { vertices } => {
            // min sum(lambda) st sum lambda_i w_i = x, lambda >= 0
            let n = vertices[0].len();
            let m = vertices.len();
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                rows.push(vertices.iter().map(|w| w[i].clone()).collect::<Vec<_>>());
            }
            let c = vec![Rat::one(); m];
            match solve_standard_lp(&RatMatrix::from_rows(rows), x, &c) {
                LpOutcome::Optimal { value, .. } => Ok(value),
                _ => Err(Error::OriginNotInterior),
            }
        }
        Body::Ball { .. } | Body::Simplex { .. } => Err(Error::UnsupportedRepresentation),
    }
}

/// A certified rational r with r B_n contained in K: the minimum facet
/// distance b_i/|a_i| rounded down rationally. Exact for boxes and balls.
/// Any valid lower bound only enlarges downstream search spaces.
pub fn inradius_lb(k: &SymBody) -> Result<Rat> {
    match k.body() {
        Body::Box { r } => Ok(r[0].clone()),
        Body::Ball { radius } => Ok(radius.clone()),
        Body::CrossPolytope { r } => {
            let s: Rat = r.iter().map(|v| v * v).sum();
            Ok(sqrt_lower(&s.recip()))
        }
        _ => {
            let (a, b) = k.body().hrep()?;
            if b.iter().any(|v| !v.is_positive()) {
                return Err(Error::OriginNotInterior);
            }
            let mut best: Option<Rat> = None;
            for i in 0..a.rows() {
                let norm_sq: Rat = (0..a.cols()).map(|j| a.at(i, j) * a.at(i, j)).sum();
                let dist_sq = &b[i] * &b[i] / norm_sq;
                if best.as_ref().map(|cur| dist_sq < *cur).unwrap_or(true) {
                    best = Some(dist_sq);
                }
            }
            Ok(sqrt_lower(&best.expect("at least one facet")))
        }
    }
}

/// Exact squared circumradius for bodies with an explicit V-representation.
pub fn circumradius_sq(k: &SymBody) -> Result<Rat> {
    match k.body() {
        Body::Ball { radius } => Ok(radius * radius),
        Body::Box { r } => Ok(r.iter().map(|v| v * v).sum()),
        Body::CrossPolytope { r } => Ok(r.iter().map(|v| (v * v).recip()).max().expect("nonempty")),
        _ => {
            let verts = k.body().vertices().ok_or(Error::UnsupportedRepresentation)?;
            Ok(verts.iter().map(|v| v.iter().map(|x| x * x).sum::<Rat>()).max().expect("nonempty"))
        }
    }
}

/// V-representation of the projection of a symmetric body along a lattice
/// plane, expressed in the projected-lattice coordinate chart.
pub fn project_body(k: &SymBody, proj: &ProjectedLattice) -> Result<SymBody> {
    let chart = proj.chart_map.as_ref().ok_or(Error::UnsupportedRepresentation)?;
    let verts = k.body().vertices().ok_or(Error::UnsupportedRepresentation)?;
    let mut out: Vec<Point> = Vec::new();
    for v in &verts {
        let c = chart.mul_vec(v);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    let d = chart.rows();
    let verts = if d <= 4 && out.len() > d + 1 { extreme_points(&out) } else { out };
    SymBody::certify(Body::VPolytope { vertices: verts })
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn affine_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let n = points[0].len();
    let rows: Vec<Vec<Rat>> =
        points[1..].iter().map(|p| (0..n).map(|i| &p[i] - &points[0][i]).collect()).collect();
    RatMatrix::from_rows(rows).rank()
}

/// x in conv(points)? Phase-1 feasibility of the convex combination system.
fn in_convex_hull(points: &[Point], x: &[Rat]) -> bool {
    let n = x.len();
    let m = points.len();
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..n {
        rows.push(points.iter().map(|p| p[i].clone()).collect::<Vec<_>>());
    }
    rows.push(vec![Rat::one(); m]);
    let mut rhs: Vec<Rat> = x.to_vec();
    rhs.push(Rat::one());
    let c = vec![Rat::zero(); m];
    matches!(solve_standard_lp(&RatMatrix::from_rows(rows), &rhs, &c), LpOutcome::Optimal { .. })
}

/// Keep only extreme points of the candidate set.
pub fn extreme_points(points: &[Point]) -> Vec<Point> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<Point> =
            points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        if !in_convex_hull(&others, p) {
            out.push(p.clone());
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        for i in start..=(n - needed) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n && k > 0 {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Facets of conv(vertices) for a full-dimensional polytope: rows
/// (a_i, b_i) with <a_i, x> <= b_i, each a_i a primitive integer normal.
pub fn facet_enumeration(vertices: &[Point]) -> Result<(RatMatrix, Vec<Rat>)> {
    let n = vertices[0].len();
    if vertices.len() < n + 1 {
        return Err(Error::InvalidParams("too few vertices".into()));
    }
    if n == 1 {
        let lo = vertices.iter().map(|v| v[0].clone()).min().expect("nonempty");
        let hi = vertices.iter().map(|v| v[0].clone()).max().expect("nonempty");
        let a = RatMatrix::from_rows(vec![vec![Rat::one()], vec![-Rat::one()]]);
        return Ok((a, vec![hi, -lo]));
    }
    let mut facets: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for subset in combinations(vertices.len(), n) {
        let base = &vertices[subset[0]];
        let rows: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&j| (0..n).map(|i| &vertices[j][i] - &base[i]).collect())
            .collect();
        let m = RatMatrix::from_rows(rows);
        if m.rank() != n - 1 {
            continue;
        }
        let ker = kernel_basis(&m);
        if ker.cols() != 1 {
            continue;
        }
        let normal: Vec<Rat> = (0..n).map(|i| Rat::from_integer(ker.at(i, 0).clone())).collect();
        let beta = dot(&normal, base);
        let mut pos = false;
        let mut neg = false;
        for v in vertices {
            let d = dot(&normal, v);
            if d > beta {
                pos = true;
            }
            if d < beta {
                neg = true;
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue; // interior hyperplane, not a facet
        }
        let (normal, beta) = if pos {
            (normal.iter().map(|x| -x.clone()).collect::<Vec<_>>(), -beta)
        } else {
            (normal, beta)
        };
        if !facets.iter().any(|(a, b)| *a == normal && *b == beta) {
            facets.push((normal, beta));
        }
    }
    if facets.is_empty() {
        return Err(Error::InvalidParams("degenerate polytope".into()));
    }
    facets.sort();
    let b: Vec<Rat> = facets.iter().map(|(_, b)| b.clone()).collect();
    let a = RatMatrix::from_rows(facets.into_iter().map(|(a, _)| a).collect());
    Ok((a, b))
}

/// Vertices of { x : A x <= b }: feasible intersections of n facets.
pub fn vertex_enumeration(a: &RatMatrix, b: &[Rat]) -> Result<Vec<Point>> {
    let n = a.cols();
    if n > 4 {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut verts: Vec<Point> = Vec::new();
    for subset in combinations(a.rows(), n) {
        let mut m = RatMatrix::zero(n, n);
        let mut rhs = Vec::with_capacity(n);
        for (row, &i) in subset.iter().enumerate() {
            for j in 0..n {
                *m.at_mut(row, j) = a.at(i, j).clone();
            }
            rhs.push(b[i].clone());
        }
        let Ok(minv) = m.inverse() else { continue };
        let x = minv.mul_vec(&rhs);
        let feasible = (0..a.rows()).all(|i| {
            let s: Rat = (0..n).map(|j| a.at(i, j) * &x[j]).sum();
            s <= b[i]
        });
        if feasible && !verts.contains(&x) {
            verts.push(x);
        }
    }
    if verts.is_empty() {
        return Err(Error::InvalidParams("empty polytope".into()));
    }
    Ok(verts)
}

/// Triangulation of conv(points) into simplices given by vertex indices.
/// Recursion maps facets into affine charts, which preserves the face
/// structure; volumes are only evaluated at the top level.
fn triangulate(points: &[Point], dim: usize) -> Result<Vec<Vec<usize>>> {
    if dim == 1 {
        let lo = (0..points.len()).min_by(|&a, &b| points[a][0].cmp(&points[b][0])).unwrap();
        let hi = (0..points.len()).max_by(|&a, &b| points[a][0].cmp(&points[b][0])).unwrap();
        return Ok(vec![vec![lo, hi]]);
    }
    let apex = (0..points.len()).min_by(|&a, &b| points[a].cmp(&points[b])).unwrap();
    let (a, b) = facet_enumeration(points)?;
    let mut out = Vec::new();
    for f in 0..a.rows() {
        let row: Vec<Rat> = (0..a.cols()).map(|j| a.at(f, j).clone()).collect();
        if dot(&row, &points[apex]) == b[f] {
            continue; // apex lies on this facet
        }
        let on_facet: Vec<usize> =
            (0..points.len()).filter(|&i| dot(&row, &points[i]) == b[f]).collect();
        let base = &points[on_facet[0]];
        let mut dirs: Vec<Vec<Rat>> = Vec::new();
        for &i in &on_facet[1..] {
            let d: Vec<Rat> = (0..dim).map(|t| &points[i][t] - &base[t]).collect();
            let mut test = dirs.clone();
            test.push(d.clone());
            if RatMatrix::from_rows(test.clone()).rank() == test.len() {
                dirs.push(d);
            }
            if dirs.len() == dim - 1 {
                break;
            }
        }
        debug_assert_eq!(dirs.len(), dim - 1);
        let m = RatMatrix::from_rows(dirs).transpose(); // dim x (dim-1)
        let mtm_inv = m.transpose().mul(&m).inverse().expect("independent directions");
        let chart = mtm_inv.mul(&m.transpose());
        let chart_pts: Vec<Point> = on_facet
            .iter()
            .map(|&i| {
                let diff: Vec<Rat> = (0..dim).map(|t| &points[i][t] - &base[t]).collect();
                chart.mul_vec(&diff)
            })
            .collect();
        for simplex in triangulate(&chart_pts, dim - 1)? {
            let mut s: Vec<usize> = simplex.into_iter().map(|i| on_facet[i]).collect();
            s.push(apex);
            out.push(s);
        }
    }
    Ok(out)
}

/// Volume of conv(vertices) via fan triangulation (dim <= 4).
pub fn polytope_volume(vertices: &[Point]) -> Result<Rat> {
    let n = vertices[0].len();
    if n > 4 {
        return Err(Error::DimensionTooLarge(n));
    }
    let verts = extreme_points(vertices);
    if affine_rank(&verts) != n {
        return Err(Error::InvalidParams("polytope is not full-dimensional".into()));
    }
    if n == 1 {
        let lo = verts.iter().map(|v| v[0].clone()).min().unwrap();
        let hi = verts.iter().map(|v| v[0].clone()).max().unwrap();
        return Ok(hi - lo);
    }
    let mut vol = Rat::zero();
    for simplex in triangulate(&verts, n)? {
        let base = &verts[simplex[0]];
        let mut m = RatMatrix::zero(n, n);
        for (col, &vi) in simplex[1..].iter().enumerate() {
            for i in 0..n {
                *m.at_mut(i, col) = &verts[vi][i] - &base[i];
            }
        }
        vol += m.det().abs();
    }
    Ok(vol / Rat::from_integer(factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{project_along, saturate, Lattice};
    use crate::ratlin::{rat, rat_i, IntMatrix};

    fn pt(v: &[(i64, i64)]) -> Point {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn boxr(v: &[(i64, i64)]) -> Body {
        Body::make_box(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn hexagon_verts() -> Vec<Point> {
        vec![
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(-1, 1), (1, 1)]),
            pt(&[(-1, 1), (0, 1)]),
            pt(&[(0, 1), (-1, 1)]),
            pt(&[(1, 1), (-1, 1)]),
        ]
    }

    #[test]
    fn difference_body_examples() {
        let k = boxr(&[(1, 1), (2, 1)]);
        let kc = difference_body(&k).unwrap();
        assert_eq!(*kc.body(), boxr(&[(2, 1), (4, 1)]));

        // 1-dim segment-simplex {0, 1} -> [-1, 1]
        let seg = Body::make_simplex(vec![pt(&[(0, 1)]), pt(&[(1, 1)])]).unwrap();
        let kc = difference_body(&seg).unwrap();
        let mut vs = kc.body().vertices().unwrap();
        vs.sort();
        assert_eq!(vs, vec![pt(&[(-1, 1)]), pt(&[(1, 1)])]);

        // triangle {0, e1, e2}: hexagon of the six coordinate differences
        // (hull oracle drops the interior origin)
        let tri = Body::make_simplex(vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
        ])
        .unwrap();
        let kc = difference_body(&tri).unwrap();
        let mut vs = kc.body().vertices().unwrap();
        vs.sort();
        let mut expect = hexagon_verts();
        expect.sort();
        assert_eq!(vs, expect);
    }

    #[test]
    fn polar_examples() {
        let b = SymBody::certify(boxr(&[(1, 1), (2, 1)])).unwrap();
        let p = polar_body(&b).unwrap();
        assert_eq!(*p.body(), Body::CrossPolytope { r: vec![rat_i(1), rat_i(2)] });
        assert_eq!(polar_body(&p).unwrap(), b);

        let ball = SymBody::certify(Body::make_ball(rat_i(1)).unwrap()).unwrap();
        assert_eq!(polar_body(&ball).unwrap(), ball);

        let cube = SymBody::certify(boxr(&[(1, 1), (1, 1), (1, 1)])).unwrap();
        let cross = polar_body(&cube).unwrap();
        assert_eq!(*cross.body(), Body::CrossPolytope { r: vec![rat_i(1); 3] });
    }

    #[test]
    fn norm_examples() {
        let b = SymBody::certify(boxr(&[(2, 1), (2, 1)])).unwrap();
        assert_eq!(norm(&b, &pt(&[(1, 1), (0, 1)])).unwrap(), rat(1, 2));
        assert_eq!(norm(&b, &pt(&[(0, 1), (0, 1)])).unwrap(), rat_i(0));

        // 2 * conv(+-e_i): gauge of e1 is 1/2, via the exact LP route
        let two_cross = SymBody::certify(
            Body::make_vpolytope(vec![
                pt(&[(2, 1), (0, 1)]),
                pt(&[(-2, 1), (0, 1)]),
                pt(&[(0, 1), (2, 1)]),
                pt(&[(0, 1), (-2, 1)]),
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(norm(&two_cross, &pt(&[(1, 1), (0, 1)])).unwrap(), rat(1, 2));

        let b12 = SymBody::certify(boxr(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(norm(&b12, &pt(&[(1, 1), (1, 1)])).unwrap(), rat_i(1));
    }

    #[test]
    fn norm_lp_matches_hrep_route() {
        // dual-route check: V-rep LP vs H-rep maximum on the same hexagon
        let hexagon = Body::make_vpolytope(hexagon_verts()).unwrap();
        let sym_v = SymBody::certify(hexagon.clone()).unwrap();
        let (a, b) = hexagon.hrep().unwrap();
        let sym_h = SymBody::certify(Body::HPolytope { a, b }).unwrap();
        for x in [
            pt(&[(1, 1), (1, 1)]),
            pt(&[(3, 2), (-1, 3)]),
            pt(&[(0, 1), (5, 7)]),
            pt(&[(-2, 1), (1, 1)]),
        ] {
            assert_eq!(norm(&sym_v, &x).unwrap(), norm(&sym_h, &x).unwrap());
        }
    }

    #[test]
    fn support_examples() {
        let b = boxr(&[(1, 1), (2, 1)]);
        assert_eq!(b.support(&pt(&[(0, 1), (1, 1)])).unwrap(), rat_i(2));

        let cross = Body::make_crosspolytope(vec![rat_i(1), rat_i(1)]).unwrap();
        assert_eq!(cross.support(&pt(&[(1, 1), (1, 1)])).unwrap(), rat_i(1));

        let simplex = Body::make_simplex(vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(simplex.support(&pt(&[(1, 1), (1, 1)])).unwrap(), rat_i(1));

        // H-rep support via LP agrees with the V-rep maximum
        let (a, bb) = simplex.hrep().unwrap();
        let h = Body::HPolytope { a, b: bb };
        for u in [pt(&[(1, 1), (1, 1)]), pt(&[(-1, 1), (2, 1)]), pt(&[(0, 1), (-1, 1)])] {
            assert_eq!(h.support(&u).unwrap(), simplex.support(&u).unwrap());
        }
    }

    #[test]
    fn support_difference_identity() {
        // h(K, u) + h(K, -u) = h(K_c, u)
        let tri = Body::make_simplex(vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(3, 1), (1, 2)]),
            pt(&[(-1, 1), (2, 1)]),
        ])
        .unwrap();
        let kc = difference_body(&tri).unwrap();
        for u in [pt(&[(1, 1), (0, 1)]), pt(&[(2, 1), (3, 1)]), pt(&[(-1, 1), (5, 2)])] {
            let neg: Point = u.iter().map(|x| -x.clone()).collect();
            let lhs = tri.support(&u).unwrap() + tri.support(&neg).unwrap();
            assert_eq!(lhs, kc.body().support(&u).unwrap());
        }
    }

    #[test]
    fn volume_examples() {
        assert_eq!(boxr(&[(1, 1), (2, 1)]).volume().unwrap(), rat_i(8));
        let cross3 = Body::make_crosspolytope(vec![rat_i(1); 3]).unwrap();
        assert_eq!(cross3.volume().unwrap(), rat(4, 3));

        // hexagon: shoelace oracle on the angularly ordered vertices gives 3
        let ordered = hexagon_verts();
        let mut shoelace = Rat::zero();
        for i in 0..ordered.len() {
            let j = (i + 1) % ordered.len();
            shoelace += &ordered[i][0] * &ordered[j][1] - &ordered[j][0] * &ordered[i][1];
        }
        assert_eq!(shoelace / rat_i(2), rat_i(3));
        let hexagon = Body::make_vpolytope(hexagon_verts()).unwrap();
        assert_eq!(hexagon.volume().unwrap(), rat_i(3));

        let tet = Body::make_simplex(vec![
            pt(&[(0, 1), (0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1), (0, 1)]),
            pt(&[(0, 1), (1, 1), (0, 1)]),
            pt(&[(0, 1), (0, 1), (1, 1)]),
        ])
        .unwrap();
        assert_eq!(tet.volume().unwrap(), rat(1, 6));

        // 3-dim V-polytope route agrees with the closed form
        let cube =
            Body::make_vpolytope(boxr(&[(1, 1), (1, 1), (1, 1)]).vertices().unwrap()).unwrap();
        assert_eq!(cube.volume().unwrap(), rat_i(8));
    }

    #[test]
    fn mahler_equality_box_cross() {
        // vol(Box(r)) * vol(polar(Box(r))) = 4^n / n!
        for r in [vec![rat_i(1), rat_i(2)], vec![rat(1, 2), rat_i(1), rat_i(3)]] {
            let n = r.len() as u32;
            let b = SymBody::certify(Body::make_box(r.clone()).unwrap()).unwrap();
            let p = polar_body(&b).unwrap();
            let prod = b.body().volume().unwrap() * p.body().volume().unwrap();
            let mut fact = rat_i(1);
            for k in 2..=n {
                fact *= rat_i(k as i64);
            }
            assert_eq!(prod, rat_i(4).pow(n as i32) / fact);
        }
    }

    #[test]
    fn inradius_examples() {
        let b = SymBody::certify(boxr(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(inradius_lb(&b).unwrap(), rat_i(1));

        let ball = SymBody::certify(Body::make_ball(rat(3, 2)).unwrap()).unwrap();
        assert_eq!(inradius_lb(&ball).unwrap(), rat(3, 2));

        // hexagon: any certified positive lower bound below every facet distance
        let hexagon =
            SymBody::certify(Body::make_vpolytope(hexagon_verts()).unwrap()).unwrap();
        let lb = inradius_lb(&hexagon).unwrap();
        assert!(lb.is_positive());
        let (a, b) = hexagon.body().hrep().unwrap();
        for i in 0..a.rows() {
            let norm_sq: Rat = (0..2).map(|j| a.at(i, j) * a.at(i, j)).sum();
            assert!(&lb * &lb <= &b[i] * &b[i] / norm_sq, "lb below facet {i} distance");
        }
    }

    #[test]
    fn membership_consistency() {
        // norm(K, x) <= 1 iff x in K
        let bodies = [
            SymBody::certify(boxr(&[(1, 1), (2, 1)])).unwrap(),
            SymBody::certify(Body::make_crosspolytope(vec![rat_i(1), rat(1, 2)]).unwrap())
                .unwrap(),
            SymBody::certify(Body::make_vpolytope(hexagon_verts()).unwrap()).unwrap(),
        ];
        let xs = [
            pt(&[(1, 1), (2, 1)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(0, 1), (3, 1)]),
            pt(&[(-1, 2), (1, 2)]),
        ];
        for k in &bodies {
            for x in &xs {
                let g = norm(k, x).unwrap();
                let inside = k.body().contains(x).unwrap();
                assert_eq!(g <= rat_i(1), inside, "{x:?}");
            }
        }
    }

    #[test]
    fn project_body_examples() {
        // Box((1,1)) along e2: segment [-1, 1] in the e1 chart
        let z2 = Lattice::standard(2);
        let plane =
            saturate(&z2, &IntMatrix::from_cols(vec![vec![Int::zero(), Int::one()]])).unwrap();
        let proj = project_along(&z2, &plane).unwrap();
        let b = SymBody::certify(boxr(&[(1, 1), (1, 1)])).unwrap();
        let seg = project_body(&b, &proj).unwrap();
        let mut vs = seg.body().vertices().unwrap();
        vs.sort();
        assert_eq!(vs, vec![pt(&[(-1, 1)]), pt(&[(1, 1)])]);

        // Box((1,2)) along span{(1,1)}: endpoints have ambient squared
        // length 9/2 regardless of chart normalization
        let plane =
            saturate(&z2, &IntMatrix::from_cols(vec![vec![Int::one(), Int::one()]])).unwrap();
        let proj = project_along(&z2, &plane).unwrap();
        let b = SymBody::certify(boxr(&[(1, 1), (2, 1)])).unwrap();
        let seg = project_body(&b, &proj).unwrap();
        let vs = seg.body().vertices().unwrap();
        let max_sq = vs.iter().map(|v| &v[0] * &v[0] * proj.gram.at(0, 0)).max().unwrap();
        assert_eq!(max_sq, rat(9, 2));
    }

    #[test]
    fn polar_round_trip_vpolytope() {
        let hexagon =
            SymBody::certify(Body::make_vpolytope(hexagon_verts()).unwrap()).unwrap();
        let p = polar_body(&hexagon).unwrap();
        let pp = polar_body(&p).unwrap();
        let mut vs = pp.body().vertices().unwrap();
        vs.sort();
        let mut expect = hexagon_verts();
        expect.sort();
        assert_eq!(vs, expect);
    }

    #[test]
    fn norm_homogeneous() {
        let b = SymBody::certify(boxr(&[(1, 1), (3, 2)])).unwrap();
        let x = pt(&[(2, 3), (5, 7)]);
        let g = norm(&b, &x).unwrap();
        for c in [rat(3, 2), rat_i(4), rat(-2, 5)] {
            let cx: Point = x.iter().map(|v| v * &c).collect();
            assert_eq!(norm(&b, &cx).unwrap(), c.abs() * &g);
        }
    }

    #[test]
    fn invalid_bodies_rejected() {
        assert!(Body::make_box(vec![rat_i(2), rat_i(1)]).is_err()); // unsorted
        assert!(Body::make_box(vec![rat_i(0)]).is_err());
        assert!(
            SymBody::certify(Body::make_simplex(vec![pt(&[(0, 1)]), pt(&[(1, 1)])]).unwrap())
                .is_err()
        );
        // asymmetric V-polytope
        assert!(SymBody::certify(
            Body::make_vpolytope(vec![
                pt(&[(1, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(-1, 1), (-1, 1)]),
            ])
            .unwrap()
        )
        .is_err());
        // unbounded H-polytope
        let a = RatMatrix::from_rows(vec![vec![rat_i(1), rat_i(0)]]);
        assert!(Body::make_hpolytope(a, vec![rat_i(1)]).is_err());
    }
}
