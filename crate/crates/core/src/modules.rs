//! Finite-dimensional weight modules and the action of Taylor elements on
//! them.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{StructureTable, Symbol};
use crate::coeff::CartanRational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{factorial, fmt_q, q, qf, Q};
use crate::taylor::{Engine, Relations, TaylorElement};

pub const MAX_MODULE_DIM: usize = 200;

#[derive(Debug, Clone)]
pub enum ModuleKind {
    Defining,
    Adjoint,
    /// su(2) irreducible module of spin `two_j / 2`.
    Spin(u32),
    Tensor(Box<ModuleKind>, Box<ModuleKind>),
}

#[derive(Debug, Clone)]
pub struct WeightModule {
    pub labels: Vec<String>,
    /// `h_i` eigenvalues per basis vector.
    pub weights: Vec<Vec<Q>>,
    pub parity: Vec<u8>,
    /// Action of `e_{±γ}` keyed by signed root coordinates.
    pub action: BTreeMap<Vec<i64>, Matrix>,
    pub cartan: Vec<Matrix>,
}

impl WeightModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn root_action(&self, coords: &[i64]) -> Result<&Matrix> {
        self.action
            .get(coords)
            .ok_or_else(|| Error::UnknownRoot(crate::rootsys::root_label(coords)))
    }

    pub fn symbol_action(&self, t: &StructureTable, s: Symbol) -> Matrix {
        match s {
            Symbol::Cartan(i) => self.cartan[i].clone(),
            _ => self.action[&t.weight(s)].clone(),
        }
    }

    fn from_parts(t: &StructureTable, labels: Vec<String>, weights: Vec<Vec<Q>>, parity: Vec<u8>, mats: Vec<(Symbol, Matrix)>) -> Self {
        let r = t.system.rank();
        let cartan = (0..r)
            .map(|i| Matrix::diag(&weights.iter().map(|w| w[i].clone()).collect::<Vec<_>>()))
            .collect();
        let action = mats
            .into_iter()
            .filter(|(s, _)| !matches!(s, Symbol::Cartan(_)))
            .map(|(s, m)| (t.weight(s), m))
            .collect();
        WeightModule {
            labels,
            weights,
            parity,
            action,
            cartan,
        }
    }
}

pub fn build_module(t: &StructureTable, kind: &ModuleKind) -> Result<WeightModule> {
    let dim = module_dim(t, kind);
    if dim > MAX_MODULE_DIM {
        return Err(Error::TooLarge(format!("module of dimension {dim}")));
    }
    let r = t.system.rank();
    let m = match kind {
        ModuleKind::Defining => {
            let rep = &t.rep;
            WeightModule::from_parts(
                t,
                (0..rep.dim).map(|k| format!("v{k}")).collect(),
                rep.weights.iter().map(|w| w.iter().map(|x| q(*x)).collect()).collect(),
                rep.parity.clone(),
                t.symbols().into_iter().map(|s| (s, t.matrix(s).clone())).collect(),
            )
        }
        ModuleKind::Adjoint => {
            let syms = t.symbols();
            let n = syms.len();
            let idx = |s: Symbol| syms.iter().position(|x| *x == s).unwrap();
            let mats = syms
                .iter()
                .map(|&x| {
                    let mut m = Matrix::zeros(n, n);
                    for (j, &y) in syms.iter().enumerate() {
                        for (z, c) in t.bracket(x, y).unwrap() {
                            m[(idx(*z), j)] += c.clone();
                        }
                    }
                    (x, m)
                })
                .collect();
            WeightModule::from_parts(
                t,
                syms.iter().map(|s| t.name(*s)).collect(),
                syms.iter().map(|s| t.system.pairing(&t.weight(*s)).into_iter().map(q).collect()).collect(),
                syms.iter().map(|s| t.parity(*s)).collect(),
                mats,
            )
        }
        ModuleKind::Spin(two_j) => {
            if r != 1 || t.system.spec.is_super() {
                return Err(Error::UnsupportedAlgebra(format!("spin modules need su(2), got {}", t.system.spec)));
            }
            let n = *two_j as usize + 1;
            let tj = *two_j as i64;
            let mut e = Matrix::zeros(n, n);
            let mut f = Matrix::zeros(n, n);
            for k in 0..n {
                if k + 1 < n {
                    f[(k + 1, k)] = Q::one();
                }
                if k > 0 {
                    let kk = k as i64;
                    e[(k - 1, k)] = q(kk * (tj - kk + 1));
                }
            }
            WeightModule::from_parts(
                t,
                (0..n).map(|k| format!("v{k}")).collect(),
                (0..n).map(|k| vec![q(tj - 2 * k as i64)]).collect(),
                vec![0; n],
                vec![(Symbol::Raise(0), e), (Symbol::Lower(0), f)],
            )
        }
        ModuleKind::Tensor(a, b) => {
            let ma = build_module(t, a)?;
            let mb = build_module(t, b)?;
            tensor(t, &ma, &mb)
        }
    };
    if !check_brackets(&m, t) {
        return Err(Error::Internal(format!("module {kind:?} violates the brackets")));
    }
    Ok(m)
}

fn module_dim(t: &StructureTable, kind: &ModuleKind) -> usize {
    match kind {
        ModuleKind::Defining => t.rep.dim,
        ModuleKind::Adjoint => t.symbols().len(),
        ModuleKind::Spin(two_j) => *two_j as usize + 1,
        ModuleKind::Tensor(a, b) => module_dim(t, a).saturating_mul(module_dim(t, b)),
    }
}

/// `x ↦ x⊗1 + σ_x⊗x` with the super sign `σ_x = (−1)^{|x||a|}` on the left factor.
pub fn tensor(t: &StructureTable, a: &WeightModule, b: &WeightModule) -> WeightModule {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut labels = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut parity = Vec::with_capacity(n);
    for i in 0..da {
        for j in 0..db {
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
            weights.push(a.weights[i].iter().zip(&b.weights[j]).map(|(x, y)| x + y).collect());
            parity.push(a.parity[i] ^ b.parity[j]);
        }
    }
    let mats = t
        .symbols()
        .into_iter()
        .filter(|s| !matches!(s, Symbol::Cartan(_)))
        .map(|s| {
            let (xa, xb) = (a.symbol_action(t, s), b.symbol_action(t, s));
            let px = t.parity(s);
            let mut m = Matrix::zeros(n, n);
            for i in 0..da {
                for j in 0..db {
                    let col = i * db + j;
                    for i2 in 0..da {
                        if !xa[(i2, i)].is_zero() {
                            m[(i2 * db + j, col)] += xa[(i2, i)].clone();
                        }
                    }
                    let sign = if px & a.parity[i] == 1 { -Q::one() } else { Q::one() };
                    for j2 in 0..db {
                        if !xb[(j2, j)].is_zero() {
                            m[(i * db + j2, col)] += &xb[(j2, j)] * &sign;
                        }
                    }
                }
            }
            (s, m)
        })
        .collect();
    WeightModule::from_parts(t, labels, weights, parity, mats)
}

/// Every bracket of the table holds between the action matrices.
pub fn check_brackets(m: &WeightModule, t: &StructureTable) -> bool {
    let syms = t.symbols();
    for &x in &syms {
        let mx = m.symbol_action(t, x);
        for &y in &syms {
            let my = m.symbol_action(t, y);
            let lhs = mx.super_bracket(&my, t.parity(x), t.parity(y));
            let mut rhs = Matrix::zeros(m.dim(), m.dim());
            for (z, c) in t.bracket(x, y).unwrap() {
                rhs = &rhs + &m.symbol_action(t, *z).scale(c);
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Sparse column form of a matrix: `cols[j] = [(i, a_ij)]`.
fn sparse_cols(m: &Matrix) -> Vec<Vec<(usize, Q)>> {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter(|i| !m[(*i, j)].is_zero())
                .map(|i| (i, m[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// Matrix of a Taylor element on a module; coefficients are evaluated at
/// the weight of the output vector.
pub fn apply<R: Relations<Coeff = CartanRational>>(
    engine: &Engine<R>,
    x: &TaylorElement<CartanRational>,
    m: &WeightModule,
) -> Result<Matrix> {
    let (out, singular) = apply_partial(engine, x, m)?;
    match singular.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(out),
    }
}

/// Like [`apply`], but columns hitting a singular coefficient are left zero
/// and listed with the error instead.
pub fn apply_partial<R: Relations<Coeff = CartanRational>>(
    engine: &Engine<R>,
    x: &TaylorElement<CartanRational>,
    m: &WeightModule,
) -> Result<(Matrix, Vec<(usize, Error)>)> {
    let letters = engine.rel.letters();
    let sparse: Vec<Vec<Vec<(usize, Q)>>> = letters
        .iter()
        .map(|l| m.root_action(&l.coords).map(sparse_cols))
        .collect::<Result<_>>()?;
    let n = m.dim();
    let mut out = Matrix::zeros(n, n);
    let mut singular: BTreeMap<usize, Error> = BTreeMap::new();
    for (mono, c) in &x.terms {
        let word = engine.word_of(mono);
        let mut values: BTreeMap<usize, std::result::Result<Q, Error>> = BTreeMap::new();
        for col in 0..n {
            if singular.contains_key(&col) {
                continue;
            }
            let mut v: BTreeMap<usize, Q> = BTreeMap::new();
            v.insert(col, Q::one());
            for &p in word.iter().rev() {
                let mut next: BTreeMap<usize, Q> = BTreeMap::new();
                for (j, a) in &v {
                    for (i, b) in &sparse[p][*j] {
                        *next.entry(*i).or_insert_with(Q::zero) += a * b;
                    }
                }
                next.retain(|_, x| !x.is_zero());
                v = next;
                if v.is_empty() {
                    break;
                }
            }
            for (row, a) in v {
                let f = values.entry(row).or_insert_with(|| c.evaluate(&m.weights[row]));
                match f {
                    Ok(f) => out[(row, col)] += a * &*f,
                    Err(e) => {
                        singular.insert(col, e.clone());
                    }
                }
            }
        }
    }
    for col in singular.keys() {
        for row in 0..n {
            out[(row, *col)] = Q::zero();
        }
    }
    Ok((out, singular.into_iter().collect()))
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub matrix: Matrix,
    /// Canonical basis of the image, one row per vector.
    pub image: Matrix,
}

pub fn project<R: Relations<Coeff = CartanRational>>(
    engine: &Engine<R>,
    p: &TaylorElement<CartanRational>,
    m: &WeightModule,
) -> Result<Projection> {
    let matrix = apply(engine, p, m)?;
    let image = matrix.column_space();
    Ok(Projection { matrix, image })
}

/// [`project`] on the columns where every coefficient is defined; the
/// others are listed and left out of the image.
pub fn project_partial<R: Relations<Coeff = CartanRational>>(
    engine: &Engine<R>,
    p: &TaylorElement<CartanRational>,
    m: &WeightModule,
) -> Result<(Projection, Vec<usize>)> {
    let (matrix, singular) = apply_partial(engine, p, m)?;
    let image = matrix.column_space();
    Ok((Projection { matrix, image }, singular.into_iter().map(|(c, _)| c).collect()))
}

/// Common kernel of the simple raising operators, as rref rows.
pub fn highest_weight_space(t: &StructureTable, m: &WeightModule) -> Matrix {
    let n = m.dim();
    let simple: Vec<&Matrix> = t.system.simple.iter().map(|s| &m.action[&s.coords]).collect();
    let mut stacked = Matrix::zeros(n * simple.len(), n);
    for (k, e) in simple.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                stacked[(k * n + i, j)] = e[(i, j)].clone();
            }
        }
    }
    let kernel = stacked.kernel();
    let mut basis = Matrix::zeros(n, kernel.len());
    for (j, v) in kernel.iter().enumerate() {
        for i in 0..n {
            basis[(i, j)] = v[i].clone();
        }
    }
    basis.column_space()
}

/// Spins `j` (as `2j`) with the multiplicity they occur with in an su(2) module.
pub fn su2_spectrum(m: &WeightModule) -> BTreeMap<i64, usize> {
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for w in &m.weights {
        *dims.entry(w[0].to_integer().try_into().unwrap()).or_insert(0) += 1;
    }
    let mut out = BTreeMap::new();
    for (&h, &d) in &dims {
        if h < 0 {
            continue;
        }
        let above = dims.get(&(h + 2)).copied().unwrap_or(0);
        if d > above {
            out.insert(h, d - above);
        }
    }
    out
}

/// Casimir `J² = f·e + (h/2)(h/2 + 1)` of an su(2) module.
pub fn casimir_su2(m: &WeightModule) -> Result<Matrix> {
    let e = m.root_action(&[1])?;
    let f = m.root_action(&[-1])?;
    let h = &m.cartan[0];
    let half = h.scale(&qf(1, 2));
    let shifted = &half + &Matrix::identity(m.dim());
    Ok(&(f * e) + &(&half * &shifted))
}

/// Projector onto the spin-`two_j/2` isotypic component by Lagrange
/// interpolation in the Casimir.
pub fn casimir_projector_su2(m: &WeightModule, two_j: i64) -> Result<Matrix> {
    let spectrum = su2_spectrum(m);
    if !spectrum.contains_key(&two_j) {
        return Err(Error::SpinAbsent(fmt_q(&qf(two_j, 2))));
    }
    let c2 = casimir_su2(m)?;
    let value = |tj: i64| qf(tj * (tj + 2), 4);
    let n = m.dim();
    let mut p = Matrix::identity(n);
    for &other in spectrum.keys().filter(|s| **s != two_j) {
        let num = &c2 - &Matrix::identity(n).scale(&value(other));
        let den = value(two_j) - value(other);
        p = &p * &num.scale(&den.recip());
    }
    Ok(p)
}

/// `⟨v_k, v_k⟩` in the spin-`two_j/2` module with `e v_k = k(2j−k+1) v_{k−1}`.
pub fn spin_norm(two_j: u32, k: u32) -> Q {
    Q::new(factorial(k as u64) * factorial(two_j as u64), factorial((two_j - k) as u64))
}

/// One Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | j m⟩`, carried as a
/// sign and an exact square. Spins and projections are doubled integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CgEntry {
    pub two_m1: i64,
    pub two_m2: i64,
    pub two_m: i64,
    pub sign: i8,
    pub square: Q,
}

impl CgEntry {
    pub fn signed_square(&self) -> Q {
        if self.sign < 0 {
            -self.square.clone()
        } else {
            self.square.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct CgTable {
    pub two_j1: u32,
    pub two_j2: u32,
    pub two_j: u32,
    pub entries: Vec<CgEntry>,
}

impl CgTable {
    pub fn get(&self, two_m1: i64, two_m2: i64) -> Option<&CgEntry> {
        self.entries.iter().find(|e| e.two_m1 == two_m1 && e.two_m2 == two_m2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "j1": fmt_q(&qf(self.two_j1 as i64, 2)),
            "j2": fmt_q(&qf(self.two_j2 as i64, 2)),
            "j": fmt_q(&qf(self.two_j as i64, 2)),
            "entries": self.entries.iter().map(|e| json!({
                "m1": fmt_q(&qf(e.two_m1, 2)),
                "m2": fmt_q(&qf(e.two_m2, 2)),
                "m": fmt_q(&qf(e.two_m, 2)),
                "sign": e.sign,
                "numerator": e.square.numer().to_string(),
                "denominator": e.square.denom().to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("j1,m1,j2,m2,j,m,sign,numerator,denominator\n");
        for e in &self.entries {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                fmt_q(&qf(self.two_j1 as i64, 2)),
                fmt_q(&qf(e.two_m1, 2)),
                fmt_q(&qf(self.two_j2 as i64, 2)),
                fmt_q(&qf(e.two_m2, 2)),
                fmt_q(&qf(self.two_j as i64, 2)),
                fmt_q(&qf(e.two_m, 2)),
                e.sign,
                e.square.numer(),
                e.square.denom()
            ));
        }
        s
    }
}

/// Clebsch–Gordan coefficients by projecting a product vector to the top of
/// the spin-`j` component and lowering.
pub fn cg_su2<R: Relations<Coeff = CartanRational>>(
    engine: &Engine<R>,
    projector: &TaylorElement<CartanRational>,
    two_j1: u32,
    two_j2: u32,
    two_j: u32,
) -> Result<CgTable> {
    let triangle = two_j + two_j1 + two_j2;
    if two_j > two_j1 + two_j2 || two_j < two_j1.abs_diff(two_j2) || triangle % 2 == 1 {
        return Err(Error::InvalidTriangle(
            fmt_q(&qf(two_j1 as i64, 2)),
            fmt_q(&qf(two_j2 as i64, 2)),
            fmt_q(&qf(two_j as i64, 2)),
        ));
    }
    let t = &engine.rel.system().spec;
    let table = crate::algebra::realize(t)?;
    let m = build_module(
        &table,
        &ModuleKind::Tensor(Box::new(ModuleKind::Spin(two_j1)), Box::new(ModuleKind::Spin(two_j2))),
    )?;
    let (pm, singular) = apply_partial(engine, projector, &m)?;
    let d2 = two_j2 as usize + 1;
    let top = ((two_j1 + two_j2 - two_j) / 2) as usize;
    // k1 + k2 = top; choose the first product vector with nonzero projection.
    let mut u: Option<Vec<Q>> = None;
    for k1 in 0..=top.min(two_j1 as usize) {
        let k2 = top - k1;
        if k2 > two_j2 as usize {
            continue;
        }
        if let Some((_, e)) = singular.iter().find(|(c, _)| *c == k1 * d2 + k2) {
            return Err(e.clone());
        }
        let v = pm.column(k1 * d2 + k2);
        if v.iter().any(|x| !x.is_zero()) {
            u = Some(v);
            break;
        }
    }
    let mut u = u.ok_or_else(|| Error::Internal("projector kills the top weight space".into()))?;
    // Condon–Shortley: the m1 = j1 component of |j j⟩ is positive.
    let lead = (0..=top)
        .filter_map(|k2| (k2 <= two_j2 as usize).then(|| u[k2].clone()))
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::Internal("top vector lacks an m1 = j1 component".into()))?;
    if lead.is_negative() {
        u = u.into_iter().map(|x| -x).collect();
    }
    let f = m.root_action(&[-1])?;
    let norm = |k1: usize, k2: usize| spin_norm(two_j1, k1 as u32) * spin_norm(two_j2, k2 as u32);
    let mut entries = Vec::new();
    for step in 0..=two_j {
        let total: Q = (0..m.dim())
            .filter(|i| !u[*i].is_zero())
            .map(|i| &u[i] * &u[i] * norm(i / d2, i % d2))
            .fold(Q::zero(), |a, b| a + b);
        for (i, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k1, k2) = (i / d2, i % d2);
            entries.push(CgEntry {
                two_m1: two_j1 as i64 - 2 * k1 as i64,
                two_m2: two_j2 as i64 - 2 * k2 as i64,
                two_m: two_j as i64 - 2 * step as i64,
                sign: if c.is_negative() { -1 } else { 1 },
                square: c * c * norm(k1, k2) / &total,
            });
        }
        u = f.apply(&u);
    }
    entries.sort_by(|a, b| b.two_m.cmp(&a.two_m).then(b.two_m1.cmp(&a.two_m1)));
    Ok(CgTable {
        two_j1,
        two_j2,
        two_j,
        entries,
    })
}

pub fn parse_spin(s: &str) -> Result<u32> {
    let v = crate::rational::parse_q(s)?;
    let two = v * q(2);
    if !two.is_integer() || two.is_negative() {
        return Err(Error::Parse(format!("not a spin: {s}")));
    }
    u32::try_from(two.to_integer()).map_err(|_| Error::Parse(format!("spin too large: {s}")))
}
