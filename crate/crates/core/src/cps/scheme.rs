use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::input_err;
use crate::exact::fm::{LinearForm, Relation};
use crate::exact::linalg::{self, Matrix};
use crate::exact::FieldScalar;
use crate::Result;

/// A polytope `{h : <normal_j, h> <= offset_j for all j}` in internal space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub normals: Vec<Vec<FieldScalar>>,
    pub offsets: Vec<FieldScalar>,
}

impl Window {
    pub fn new(normals: Vec<Vec<FieldScalar>>, offsets: Vec<FieldScalar>) -> Self {
        Window { normals, offsets }
    }

    pub fn faces(&self) -> usize {
        self.normals.len()
    }

    /// `<normal_j, h> - offset_j`; nonpositive for every face iff `h` lies in the window.
    pub fn slack(&self, j: usize, h: &[FieldScalar]) -> FieldScalar {
        &linalg::dot(&self.normals[j], h) - &self.offsets[j]
    }

    pub fn contains_closed(&self, h: &[FieldScalar]) -> bool {
        (0..self.faces()).all(|j| !self.slack(j, h).is_positive())
    }

    pub fn contains_open(&self, h: &[FieldScalar]) -> bool {
        (0..self.faces()).all(|j| self.slack(j, h).is_negative())
    }

    /// The window translated by `t`.
    pub fn translated(&self, t: &[FieldScalar]) -> Window {
        Window {
            normals: self.normals.clone(),
            offsets: self
                .normals
                .iter()
                .zip(&self.offsets)
                .map(|(n, o)| o + &linalg::dot(n, t))
                .collect(),
        }
    }

    /// Faces as constraints `offset - <normal, h> (relation) 0`.
    pub fn constraints(&self, relation: Relation) -> Vec<LinearForm> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, o)| LinearForm::affine(linalg::neg(n), o.clone(), relation))
            .collect()
    }

    /// Exact vertices: feasible intersections of `dim` independent faces.
    pub fn vertices(&self, dim: usize) -> Vec<Vec<FieldScalar>> {
        let mut out: Vec<Vec<FieldScalar>> = Vec::new();
        let m = self.faces();
        let mut idx: Vec<usize> = (0..dim).collect();
        if dim == 0 || m < dim {
            return out;
        }
        loop {
            let rows: Matrix = idx.iter().map(|&j| self.normals[j].clone()).collect();
            let rhs: Vec<FieldScalar> = idx.iter().map(|&j| self.offsets[j].clone()).collect();
            if let Some(v) = linalg::solve(&rows, &rhs) {
                if self.contains_closed(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
            // next combination
            let mut k = dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < m - dim + k {
                    idx[k] += 1;
                    for l in k + 1..dim {
                        idx[l] = idx[l - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// One family of singular hyperplanes `a + ker(form) + Gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub form: Vec<FieldScalar>,
    pub offset_point: Vec<FieldScalar>,
}

impl Hyperplane {
    pub fn linear_form(&self) -> LinearForm {
        LinearForm::new(self.form.clone(), Relation::Equal)
    }
}

/// The raw description of a cut-and-project scheme, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDescription {
    pub name: String,
    pub physical_dim: usize,
    pub internal_dim: usize,
    pub discriminant: u32,
    /// `physical_dim` rows, one column per lattice basis vector.
    pub p1: Matrix,
    /// `internal_dim` rows, one column per lattice basis vector.
    pub p2: Matrix,
    pub window: Window,
    pub hyperplanes: Vec<Hyperplane>,
    /// `internal_dim` integer vectors spanning the transversal sublattice.
    pub transversal: Vec<Vec<i64>>,
}

impl SchemeDescription {
    pub fn lattice_rank(&self) -> usize {
        self.physical_dim + self.internal_dim
    }

    /// Shape and discriminant checks; every problem is reported by field name.
    pub fn check_shapes(&self) -> Result<()> {
        let n = self.lattice_rank();
        let (dp, di) = (self.physical_dim, self.internal_dim);
        if dp == 0 || di == 0 {
            return Err(input_err!("physical_dim and internal_dim must be positive"));
        }
        let matrix_ok = |m: &Matrix, rows: usize| m.len() == rows && m.iter().all(|r| r.len() == n);
        if !matrix_ok(&self.p1, dp) {
            return Err(input_err!("p1: expected {dp} rows of length {n}"));
        }
        if !matrix_ok(&self.p2, di) {
            return Err(input_err!("p2: expected {di} rows of length {n}"));
        }
        let w = &self.window;
        if w.normals.is_empty() || w.normals.len() != w.offsets.len() {
            return Err(input_err!("window: normals and offsets must be nonempty and of equal length"));
        }
        if w.normals.iter().any(|v| v.len() != di) {
            return Err(input_err!("window.normals: every normal must have length {di}"));
        }
        if w.normals.iter().any(|v| linalg::is_zero(v)) {
            return Err(input_err!("window.normals: zero normal"));
        }
        for (i, hp) in self.hyperplanes.iter().enumerate() {
            if hp.form.len() != di || hp.offset_point.len() != di {
                return Err(input_err!("hyperplanes[{i}]: form and offset_point must have length {di}"));
            }
            if linalg::is_zero(&hp.form) {
                return Err(input_err!("hyperplanes[{i}].form: zero form"));
            }
        }
        if self.transversal.len() != di || self.transversal.iter().any(|v| v.len() != n) {
            return Err(input_err!("transversal: expected {di} integer vectors of length {n}"));
        }
        let d = self.discriminant;
        if d < 2 || !crate::exact::field::is_square_free(d) {
            return Err(input_err!("discriminant: {d} is not a square-free integer > 1"));
        }
        let scalars = self
            .p1
            .iter()
            .chain(&self.p2)
            .chain(&w.normals)
            .flatten()
            .chain(&w.offsets)
            .chain(self.hyperplanes.iter().flat_map(|h| h.form.iter().chain(&h.offset_point)));
        for x in scalars {
            if let Some(other) = x.discriminant() {
                if other != d {
                    return Err(input_err!("value {x} uses sqrt({other}) but the discriminant is {d}"));
                }
            }
        }
        Ok(())
    }
}

/// A validated scheme with the derived data used by every computation.
#[derive(Clone, Debug)]
pub struct Scheme {
    desc: SchemeDescription,
    /// Columns `p1(e_k)` stacked over `p2(e_k)`, inverted.
    stacked_inverse: Matrix,
    /// Rows are the basis vectors `p2(d_k)` of Delta.
    delta_basis: Matrix,
    /// Maps `h` to its coordinates in the Delta basis.
    delta_inverse: Matrix,
    window_vertices: Vec<Vec<FieldScalar>>,
    pub(crate) approx: Approx,
}

#[derive(Clone, Debug)]
pub(crate) struct Approx {
    pub p1_columns: Vec<Vec<f64>>,
    pub p2_columns: Vec<Vec<f64>>,
    pub inverse: Vec<Vec<f64>>,
}

pub(crate) fn approx_vec(v: &[FieldScalar]) -> Vec<f64> {
    v.iter().map(FieldScalar::to_f64).collect()
}

impl Scheme {
    /// Validates `desc` and precomputes inverses and bounding data.
    pub fn new(desc: SchemeDescription) -> Result<Self> {
        let report = super::validate::validate_scheme(&desc)?;
        if let Some(fail) = report.first_failure() {
            return Err(input_err!("scheme '{}' fails {}: {}", desc.name, fail.name, fail.detail));
        }
        Ok(Self::from_validated(desc))
    }

    fn from_validated(desc: SchemeDescription) -> Self {
        let stacked: Matrix = desc.p1.iter().chain(&desc.p2).cloned().collect();
        let stacked_inverse = linalg::inverse(&stacked).expect("validated determinant");
        let delta_basis: Matrix = desc
            .transversal
            .iter()
            .map(|d| linalg::mat_int_vec(&desc.p2, d))
            .collect();
        let delta_inverse =
            linalg::inverse(&linalg::transpose(&delta_basis)).expect("validated transversal");
        let window_vertices = desc.window.vertices(desc.internal_dim);
        let n = desc.lattice_rank();
        let columns = |m: &Matrix| (0..n).map(|k| approx_vec(&linalg::column(m, k))).collect();
        let approx = Approx {
            p1_columns: columns(&desc.p1),
            p2_columns: columns(&desc.p2),
            inverse: stacked_inverse.iter().map(|r| approx_vec(r)).collect(),
        };
        Scheme {
            desc,
            stacked_inverse,
            delta_basis,
            delta_inverse,
            window_vertices,
            approx,
        }
    }

    pub fn description(&self) -> &SchemeDescription {
        &self.desc
    }

    pub fn name(&self) -> &str {
        &self.desc.name
    }

    pub fn physical_dim(&self) -> usize {
        self.desc.physical_dim
    }

    pub fn internal_dim(&self) -> usize {
        self.desc.internal_dim
    }

    pub fn lattice_rank(&self) -> usize {
        self.desc.lattice_rank()
    }

    pub fn discriminant(&self) -> u32 {
        self.desc.discriminant
    }

    pub fn window(&self) -> &Window {
        &self.desc.window
    }

    pub fn window_vertices(&self) -> &[Vec<FieldScalar>] {
        &self.window_vertices
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.desc.hyperplanes
    }

    pub fn stacked_inverse(&self) -> &Matrix {
        &self.stacked_inverse
    }

    pub fn delta_basis(&self) -> &Matrix {
        &self.delta_basis
    }

    pub fn physical(&self, z: &[i64]) -> Vec<FieldScalar> {
        linalg::mat_int_vec(&self.desc.p1, z)
    }

    pub fn internal(&self, z: &[i64]) -> Vec<FieldScalar> {
        linalg::mat_int_vec(&self.desc.p2, z)
    }

    /// Generators of Gamma: the internal images of the lattice basis.
    pub fn gamma_generators(&self) -> Vec<Vec<FieldScalar>> {
        (0..self.lattice_rank())
            .map(|k| linalg::column(&self.desc.p2, k))
            .collect()
    }

    /// Coordinates of `h` in the Delta basis.
    pub fn delta_coordinates(&self, h: &[FieldScalar]) -> Vec<FieldScalar> {
        linalg::mat_vec(&self.delta_inverse, h)
    }

    pub fn from_delta_coordinates(&self, c: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = linalg::zeros(self.internal_dim());
        for (ck, row) in c.iter().zip(&self.delta_basis) {
            out = linalg::add(&out, &linalg::scale(ck, row));
        }
        out
    }

    /// Parses a comma-separated internal vector in this scheme's field.
    pub fn parse_internal(&self, text: &str) -> Result<Vec<FieldScalar>> {
        let v = parse_vector(text, self.discriminant())?;
        if v.len() != self.internal_dim() {
            return Err(input_err!(
                "expected {} coordinates, got {} in '{text}'",
                self.internal_dim(),
                v.len()
            ));
        }
        Ok(v)
    }
}

/// Parses `x1,x2,...` where each entry is a [`FieldScalar`].
pub fn parse_vector(text: &str, discriminant: u32) -> Result<Vec<FieldScalar>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let x: FieldScalar = part.parse()?;
        if let Some(d) = x.discriminant() {
            if d != discriminant {
                return Err(input_err!("'{part}' uses sqrt({d}), expected sqrt({discriminant})"));
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// The Ammann-Beenker scheme: `Z^4` projected to the plane twice, with the
/// octagon `p2([0,1]^4)` as window and four families of singular lines.
pub fn octagonal() -> Scheme {
    let z = FieldScalar::zero;
    let one = FieldScalar::one;
    let s = || FieldScalar::quadratic(0, 1, 1, 2, 2);
    let p1 = vec![vec![one(), s(), z(), -s()], vec![z(), s(), one(), s()]];
    let p2 = vec![vec![one(), -s(), z(), s()], vec![z(), s(), -one(), s()]];
    let r2 = || FieldScalar::sqrt(2);
    let i = |k: i64| FieldScalar::from_integer(k);
    let normals = vec![
        vec![i(0), i(1)],
        vec![i(0), i(-1)],
        vec![i(1), i(0)],
        vec![i(-1), i(0)],
        vec![i(1), i(1)],
        vec![i(-1), i(-1)],
        vec![i(1), i(-1)],
        vec![i(-1), i(1)],
    ];
    let offsets = vec![
        r2(),
        one(),
        &one() + &s(),
        s(),
        &one() + &r2(),
        one(),
        i(2),
        r2(),
    ];
    let hp = |a: i64, b: i64| Hyperplane {
        form: vec![i(a), i(b)],
        offset_point: vec![z(), z()],
    };
    let desc = SchemeDescription {
        name: "octagonal".to_string(),
        physical_dim: 2,
        internal_dim: 2,
        discriminant: 2,
        p1,
        p2,
        window: Window::new(normals, offsets),
        hyperplanes: vec![hp(0, 1), hp(-1, 1), hp(1, 0), hp(1, 1)],
        transversal: vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]],
    };
    Scheme::new(desc).expect("built-in octagonal scheme is valid")
}

/// The Fibonacci scheme: `Z^2` with `p1 = (1, phi)`, `p2 = (1, 1 - phi)` and
/// window `[-1, phi - 1]`.
pub fn fibonacci() -> Scheme {
    let phi = FieldScalar::quadratic(1, 2, 1, 2, 5);
    let one = FieldScalar::one();
    let desc = SchemeDescription {
        name: "fibonacci".to_string(),
        physical_dim: 1,
        internal_dim: 1,
        discriminant: 5,
        p1: vec![vec![one.clone(), phi.clone()]],
        p2: vec![vec![one.clone(), &one - &phi]],
        window: Window::new(vec![vec![one.clone()], vec![-&one]], vec![&phi - &one, one.clone()]),
        hyperplanes: vec![Hyperplane {
            form: vec![one],
            offset_point: vec![FieldScalar::zero()],
        }],
        transversal: vec![vec![1, 0]],
    };
    Scheme::new(desc).expect("built-in Fibonacci scheme is valid")
}
