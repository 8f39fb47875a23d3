//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! `c[i][j][k]` is the `k`-th coordinate of `[e_i, e_j]`. Constants are stored
//! densely; the algebras of interest have dimension well below 32.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance on the Jacobi residual for non-integer structure constants.
pub const JACOBI_FLOAT_TOL: f64 = 1e-12;

/// One structure constant: the `k`-th coordinate of `[e_i, e_j]` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

impl StructureEntry {
    pub fn new(i: usize, j: usize, k: usize, c: f64) -> Self {
        Self { i, j, k, c }
    }
}

/// Declarative family metadata. Vectors and matrices are in the full basis
/// of the algebra; for `G2` the pair `(a, f)` is stated with respect to the
/// metric that makes the basis orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyTag {
    /// Basis `x_1, y_1, ..., x_n, y_n, z` with `[x_i, y_i] = z`.
    Heisenberg { n: usize },
    /// `[b, u] = u` for every `u` in the abelian ideal spanned by `ideal`.
    G1 { b: usize, ideal: Vec<usize> },
    /// One-dimensional derived algebra spanned by `e`.
    G2 {
        e: usize,
        a: Vec<f64>,
        f: Vec<Vec<f64>>,
    },
}

impl FamilyTag {
    /// Index of the commutator direction when the tag describes a member of
    /// the one-dimensional-commutator family (Heisenberg algebras included).
    pub fn commutator_index(&self, dim: usize) -> Option<usize> {
        match self {
            FamilyTag::Heisenberg { n } => Some(2 * n).filter(|&e| e < dim),
            FamilyTag::G2 { e, .. } => Some(*e),
            FamilyTag::G1 { .. } => None,
        }
    }
}

/// Catalog entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogSpec {
    Heisenberg {
        n: usize,
    },
    G1 {
        dim: usize,
    },
    /// `a` has length `dim - 1` and `f` is `(dim - 1) x (dim - 1)`, both on
    /// the hyperplane spanned by the first `dim - 1` basis vectors; the last
    /// basis vector is `e`.
    G2 {
        dim: usize,
        a: Vec<f64>,
        f: Vec<Vec<f64>>,
    },
    DirectSumWithAbelian {
        base: Box<CatalogSpec>,
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<f64>,
    basis_names: Vec<String>,
    tag: Option<FamilyTag>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from the constants with `i < j`;
    /// entries with `i > j` are accepted and stored with the sign flipped.
    pub fn build(dim: usize, entries: &[StructureEntry], tag: Option<FamilyTag>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension(dim));
        }
        let mut c = vec![0.0; dim * dim * dim];
        let mut seen = vec![false; dim * dim * dim];
        for e in entries {
            if e.i >= dim || e.j >= dim || e.k >= dim {
                return Err(Error::BadSpec(format!(
                    "structure entry ({}, {}, {}) out of range for dimension {dim}",
                    e.i, e.j, e.k
                )));
            }
            if !e.c.is_finite() {
                return Err(Error::BadSpec(format!(
                    "structure entry ({}, {}, {}) is not finite",
                    e.i, e.j, e.k
                )));
            }
            if e.i == e.j {
                if e.c != 0.0 {
                    return Err(Error::BadSpec(format!(
                        "[e{0}, e{0}] must vanish",
                        e.i
                    )));
                }
                continue;
            }
            let (i, j, val) = if e.i < e.j { (e.i, e.j, e.c) } else { (e.j, e.i, -e.c) };
            let idx = (i * dim + j) * dim + e.k;
            if seen[idx] && c[idx] != val {
                return Err(Error::BadSpec(format!(
                    "conflicting entries for ([e{i}, e{j}])_{}",
                    e.k
                )));
            }
            seen[idx] = true;
            c[idx] = val;
            c[(j * dim + i) * dim + e.k] = -val;
        }
        let basis_names = (1..=dim).map(|i| format!("e{i}")).collect();
        let alg = Self {
            dim,
            c,
            basis_names,
            tag: None,
        };
        alg.check_jacobi()?;
        alg.with_tag(tag)
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::build(dim, &[], None)
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: names.len(),
            });
        }
        self.basis_names = names;
        Ok(self)
    }

    /// Attaches a tag after checking its metric-free invariants.
    pub fn with_tag(mut self, tag: Option<FamilyTag>) -> Result<Self> {
        if let Some(t) = &tag {
            self.check_tag(t)?;
        }
        self.tag = tag;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> Option<&FamilyTag> {
        self.tag.as_ref()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// `c[i][j][k]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Non-zero constants with `i < j`, in index order.
    pub fn entries(&self) -> Vec<StructureEntry> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let c = self.constant(i, j, k);
                    if c != 0.0 {
                        out.push(StructureEntry::new(i, j, k, c));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut w = DVector::zeros(n);
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    w[k] += uv * self.c[base + k];
                }
            }
        }
        w
    }

    /// Matrix of `ad_x = [x, .]` acting on coordinate columns.
    pub fn ad_matrix(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.constant(i, j, k);
                }
            }
        }
        Ok(m)
    }

    /// Coordinates of the Jacobi sum for basis vectors `(i, j, k)`.
    pub fn jacobi_sum(&self, i: usize, j: usize, k: usize) -> DVector<f64> {
        let n = self.dim;
        let e = |t| linalg::basis_vector(n, t);
        let (ei, ej, ek) = (e(i), e(j), e(k));
        let t1 = self.bracket_unchecked(&self.bracket_unchecked(&ei, &ej), &ek);
        let t2 = self.bracket_unchecked(&self.bracket_unchecked(&ej, &ek), &ei);
        let t3 = self.bracket_unchecked(&self.bracket_unchecked(&ek, &ei), &ej);
        t1 + t2 + t3
    }

    /// Largest antisymmetry defect `|c[i][j][k] + c[j][i][k]|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.constant(i, j, k) + self.constant(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest Jacobi residual over all index triples, with its location.
    pub fn jacobi_residual(&self) -> (f64, Option<(usize, usize, usize)>) {
        let n = self.dim;
        let mut worst = 0.0_f64;
        let mut at = None;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let r = self.jacobi_sum(i, j, k).amax();
                    if r > worst {
                        worst = r;
                        at = Some((i, j, k));
                    }
                }
            }
        }
        (worst, at)
    }

    fn integer_constants(&self) -> bool {
        self.c.iter().all(|x| x.fract() == 0.0 && x.abs() < 1e6)
    }

    fn check_jacobi(&self) -> Result<()> {
        let (res, at) = self.jacobi_residual();
        let scale = self.c.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let limit = if self.integer_constants() {
            0.0
        } else {
            JACOBI_FLOAT_TOL * scale * scale
        };
        match at {
            Some((i, j, k)) if res > limit => Err(Error::JacobiViolation {
                i,
                j,
                k,
                residual: res,
            }),
            _ => Ok(()),
        }
    }

    fn check_tag(&self, tag: &FamilyTag) -> Result<()> {
        let n = self.dim;
        let bad = |msg: String| Err(Error::BadSpec(msg));
        match tag {
            FamilyTag::Heisenberg { n: h } => {
                if *h == 0 || 2 * h + 1 > n {
                    return bad(format!("Heisenberg({h}) tag does not fit dimension {n}"));
                }
                let z = 2 * h;
                for p in 0..n {
                    for q in 0..n {
                        for k in 0..n {
                            let want = if k != z {
                                0.0
                            } else if p < z && q < z && p % 2 == 0 && q == p + 1 {
                                1.0
                            } else if p < z && q < z && q % 2 == 0 && p == q + 1 {
                                -1.0
                            } else {
                                0.0
                            };
                            if self.constant(p, q, k) != want {
                                return bad(format!(
                                    "Heisenberg tag disagrees with ([e{}, e{}])_{}",
                                    p + 1,
                                    q + 1,
                                    k + 1
                                ));
                            }
                        }
                    }
                }
                Ok(())
            }
            FamilyTag::G1 { b, ideal } => {
                if *b >= n || ideal.len() + 1 != n || ideal.iter().any(|&u| u >= n || u == *b) {
                    return bad("G1 tag needs b and a codimension-one ideal".into());
                }
                let mut sorted = ideal.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != ideal.len() {
                    return bad("G1 ideal indices repeat".into());
                }
                for &u in ideal {
                    let br = self.bracket_unchecked(
                        &linalg::basis_vector(n, *b),
                        &linalg::basis_vector(n, u),
                    );
                    if (br - linalg::basis_vector(n, u)).amax() > JACOBI_FLOAT_TOL {
                        return bad(format!("[b, e{}] != e{}", u + 1, u + 1));
                    }
                    for &w in ideal {
                        if (0..n).any(|k| self.constant(u, w, k).abs() > JACOBI_FLOAT_TOL) {
                            return bad("G1 ideal is not abelian".into());
                        }
                    }
                }
                Ok(())
            }
            FamilyTag::G2 { e, a, f } => {
                if *e >= n || a.len() != n || f.len() != n || f.iter().any(|r| r.len() != n) {
                    return bad("G2 tag shape does not match the dimension".into());
                }
                // Metric-dependent identities are checked against an explicit metric
                // by the frame resolver; here only the derived algebra is checked.
                let derived = self.derived_subalgebra();
                let ev = linalg::basis_vector(n, *e);
                let ok = derived.len() == 1 && {
                    let d = &derived[0];
                    (d.dot(&ev).abs() - 1.0).abs() < 1e-10
                };
                if !ok {
                    return bad(format!("derived algebra is not span{{e{}}}", e + 1));
                }
                Ok(())
            }
        }
    }

    /// Basis of `[g, g]` from the column space of all basis brackets.
    pub fn derived_subalgebra(&self) -> Vec<DVector<f64>> {
        let n = self.dim;
        let mut cols = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                cols.push(DVector::from_fn(n, |k, _| self.constant(i, j, k)));
            }
        }
        linalg::column_space(&linalg::hstack(n, &cols))
    }

    /// Basis of the center, the common null space of all `ad_{e_i}`.
    pub fn center(&self) -> Vec<DVector<f64>> {
        linalg::null_space(&self.stacked_ad())
    }

    /// All `ad_{e_i}` stacked vertically (`n^2 x n`).
    pub(crate) fn stacked_ad(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n * n, n);
        for i in 0..n {
            let ad = self
                .ad_matrix(&linalg::basis_vector(n, i))
                .expect("basis vector has the right length");
            m.view_mut((i * n, 0), (n, n)).copy_from(&ad);
        }
        m
    }

    /// Whether the lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.dim;
        let scale = self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut current: Vec<DVector<f64>> = (0..n).map(|i| linalg::basis_vector(n, i)).collect();
        for _ in 0..=n {
            if current.is_empty() {
                return true;
            }
            let mut cols = Vec::with_capacity(n * current.len());
            for i in 0..n {
                let ei = linalg::basis_vector(n, i);
                for w in &current {
                    cols.push(self.bracket_unchecked(&ei, w));
                }
            }
            let next = linalg::column_space_scaled(&linalg::hstack(n, &cols), scale);
            if next.len() == current.len() {
                return false;
            }
            current = next;
        }
        current.is_empty()
    }

    /// Structure constants expressed in the basis given by the columns of
    /// `p` (new `e'_j = sum_i p[i][j] e_i`). Tags are dropped.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim;
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.nrows(),
            });
        }
        let p_inv = p.clone().try_inverse().ok_or_else(|| {
            Error::BadSpec("change of basis matrix is singular".into())
        })?;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let br = self.bracket_unchecked(&p.column(i).into_owned(), &p.column(j).into_owned());
                let coords = &p_inv * br;
                for k in 0..n {
                    if coords[k] != 0.0 {
                        entries.push(StructureEntry::new(i, j, k, coords[k]));
                    }
                }
            }
        }
        // Rounded constants can miss exact Jacobi; check at float tolerance.
        let mut c = vec![0.0; n * n * n];
        for e in &entries {
            c[(e.i * n + e.j) * n + e.k] = e.c;
            c[(e.j * n + e.i) * n + e.k] = -e.c;
        }
        let alg = Self {
            dim: n,
            c,
            basis_names: (1..=n).map(|i| format!("e{i}")).collect(),
            tag: None,
        };
        let (res, at) = alg.jacobi_residual();
        let scale = alg.c.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        if let Some((i, j, k)) = at {
            if res > 1e-9 * scale * scale {
                return Err(Error::JacobiViolation {
                    i,
                    j,
                    k,
                    residual: res,
                });
            }
        }
        Ok(alg)
    }
}

/// Builds a catalog algebra with its tag attached.
pub fn catalog(spec: &CatalogSpec) -> Result<LieAlgebra> {
    match spec {
        CatalogSpec::Heisenberg { n } => {
            if *n == 0 {
                return Err(Error::BadSpec("Heisenberg(n) needs n >= 1".into()));
            }
            let dim = 2 * n + 1;
            let z = 2 * n;
            let entries: Vec<_> = (0..*n)
                .map(|i| StructureEntry::new(2 * i, 2 * i + 1, z, 1.0))
                .collect();
            let mut names = Vec::with_capacity(dim);
            for i in 1..=*n {
                names.push(format!("x{i}"));
                names.push(format!("y{i}"));
            }
            names.push("z".into());
            LieAlgebra::build(dim, &entries, Some(FamilyTag::Heisenberg { n: *n }))?
                .with_basis_names(names)
        }
        CatalogSpec::G1 { dim } => {
            if *dim < 2 {
                return Err(Error::BadSpec("G1 needs dimension >= 2".into()));
            }
            let entries: Vec<_> = (1..*dim).map(|u| StructureEntry::new(0, u, u, 1.0)).collect();
            let mut names = vec!["b".to_string()];
            names.extend((1..*dim).map(|u| format!("u{u}")));
            let tag = FamilyTag::G1 {
                b: 0,
                ideal: (1..*dim).collect(),
            };
            LieAlgebra::build(*dim, &entries, Some(tag))?.with_basis_names(names)
        }
        CatalogSpec::G2 { dim, a, f } => {
            if *dim < 2 {
                return Err(Error::BadSpec("G2 needs dimension >= 2".into()));
            }
            let m = dim - 1;
            if a.len() != m || f.len() != m || f.iter().any(|r| r.len() != m) {
                return Err(Error::BadSpec(format!(
                    "G2({dim}) needs a of length {m} and f of shape {m}x{m}"
                )));
            }
            let scale = f.iter().flatten().fold(1.0_f64, |s, x| s.max(x.abs()));
            for p in 0..m {
                for q in 0..m {
                    if (f[p][q] + f[q][p]).abs() > JACOBI_FLOAT_TOL * scale {
                        return Err(Error::BadSpec(format!(
                            "f is not skew: f[{p}][{q}] = {}, f[{q}][{p}] = {}",
                            f[p][q], f[q][p]
                        )));
                    }
                }
            }
            if a.iter().chain(f.iter().flatten()).any(|x| !x.is_finite()) {
                return Err(Error::BadSpec("G2 data is not finite".into()));
            }
            let e = m;
            let mut entries = Vec::new();
            for p in 0..m {
                // [z_p, e] = a_p e
                if a[p] != 0.0 {
                    entries.push(StructureEntry::new(p, e, e, a[p]));
                }
                for q in (p + 1)..m {
                    // [z_p, z_q] = g(f z_p, z_q) e, and (f z_p)_q = f[q][p]
                    if f[q][p] != 0.0 {
                        entries.push(StructureEntry::new(p, q, e, f[q][p]));
                    }
                }
            }
            let mut a_full = a.clone();
            a_full.push(0.0);
            let mut f_full: Vec<Vec<f64>> = f
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.push(0.0);
                    r
                })
                .collect();
            f_full.push(vec![0.0; *dim]);
            let tag = FamilyTag::G2 {
                e,
                a: a_full,
                f: f_full,
            };
            let alg = LieAlgebra::build(*dim, &entries, None)?;
            if alg.is_abelian() {
                return Err(Error::BadSpec("G2 data gives an abelian algebra".into()));
            }
            let mut names: Vec<String> = (1..*dim).map(|i| format!("z{i}")).collect();
            names.push("e".into());
            alg.with_tag(Some(tag))?.with_basis_names(names)
        }
        CatalogSpec::DirectSumWithAbelian { base, k } => {
            let base_alg = catalog(base)?;
            let n0 = base_alg.dim;
            let dim = n0 + k;
            let entries = base_alg.entries();
            let tag = match base_alg.tag() {
                Some(t) => match t.commutator_index(n0) {
                    Some(e) => {
                        let (a0, f0) = g2_data_of(&base_alg, t, e);
                        let mut a = a0;
                        a.resize(dim, 0.0);
                        let mut f: Vec<Vec<f64>> = f0
                            .into_iter()
                            .map(|mut r| {
                                r.resize(dim, 0.0);
                                r
                            })
                            .collect();
                        f.resize(dim, vec![0.0; dim]);
                        Some(FamilyTag::G2 { e, a, f })
                    }
                    None => None,
                },
                None => None,
            };
            let mut names = base_alg.basis_names.clone();
            names.extend((1..=*k).map(|i| format!("w{i}")));
            LieAlgebra::build(dim, &entries, tag)?.with_basis_names(names)
        }
    }
}

/// `(a, f)` in full coordinates for a tag whose commutator index is `e`,
/// with respect to the metric that makes the basis orthonormal.
fn g2_data_of(alg: &LieAlgebra, tag: &FamilyTag, e: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    if let FamilyTag::G2 { a, f, .. } = tag {
        return (a.clone(), f.clone());
    }
    let n = alg.dim;
    let a = (0..n)
        .map(|p| if p == e { 0.0 } else { alg.constant(p, e, e) })
        .collect();
    // g(f z_p, z_q) = ([z_p, z_q])_e, so f[q][p] = c[p][q][e].
    let f = (0..n)
        .map(|q| {
            (0..n)
                .map(|p| if p == e || q == e { 0.0 } else { alg.constant(p, q, e) })
                .collect()
        })
        .collect();
    (a, f)
}

/// `(a, f)` for a Heisenberg or G2 tag, in full coordinates.
pub fn g2_data(alg: &LieAlgebra) -> Option<(usize, Vec<f64>, Vec<Vec<f64>>)> {
    let tag = alg.tag()?;
    let e = tag.commutator_index(alg.dim())?;
    let (a, f) = g2_data_of(alg, tag, e);
    Some((e, a, f))
}
