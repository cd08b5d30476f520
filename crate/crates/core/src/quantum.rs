//! Quantum deformation at rank ≤ 2: `U_q(sl2)`, `U_q(sl3)` and
//! `U_q(osp(1|2))`.
//!
//! Coefficients are [`QRational`]s in `q` and `k_i = q^{h_i}`. The relation
//! table starts from the Chevalley relations and the q-commutations of the
//! composite root vector; the remaining mixed relations are obtained by
//! straightening the defining words of the composite vectors with the part of
//! the table already known.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modules::{ModuleKind, WeightModule};
use crate::ordering::NormalOrdering;
use crate::qcoeff::{LPoly, QRational};
use crate::qpoly::URational;
use crate::rational::{q, Q};
use crate::rootsys::{build_root_system, AlgebraSpec, Family, RootSystem};
use crate::taylor::{letters_for, Commutation, Engine, Letter, Monomial, Relations, TaylorElement};

pub type QuantumEngine = Engine<QuantumRelations>;
pub type QElement = TaylorElement<QRational>;

fn laurent(terms: &[(i64, i32)]) -> LPoly {
    terms
        .iter()
        .fold(LPoly::zero(), |acc, (c, e)| acc.add(&LPoly::monomial(q(*c), vec![*e])))
}

fn pow(p: &LPoly, n: u32) -> LPoly {
    (0..n).fold(LPoly::constant(Q::one()), |acc, _| acc.mul(p))
}

/// `(m)_x = (x^m − 1)/(x − 1)` for `x = s·q^t`.
pub fn q_number_base(m: u32, s: i8, t: i32) -> LPoly {
    let terms: Vec<(i64, i32)> = (0..m as i32)
        .map(|j| (if s < 0 && j % 2 == 1 { -1 } else { 1 }, j * t))
        .collect();
    laurent(&terms)
}

/// `(m)_q = 1 + q + … + q^{m−1}`.
pub fn q_number(m: u32) -> LPoly {
    q_number_base(m, 1, 1)
}

pub fn q_factorial_base(m: u32, s: i8, t: i32) -> LPoly {
    (1..=m).fold(LPoly::constant(Q::one()), |acc, j| acc.mul(&q_number_base(j, s, t)))
}

pub fn q_factorial(m: u32) -> LPoly {
    q_factorial_base(m, 1, 1)
}

/// Symmetric `[n] = (q^n − q^{−n})/(q − q^{−1})`.
pub fn sym_number(n: i64) -> URational {
    let (sign, n) = if n < 0 { (-1, -n) } else { (1, n) };
    (0..n).fold(URational::zero(), |acc, j| acc.add(&URational::q_power(q(sign), n - 1 - 2 * j)))
}

/// `(k_i − k_i^{−1})/(q − q^{−1})`.
fn cartan_quotient(i: usize) -> QRational {
    let mut up = vec![0; i + 2];
    up[i + 1] = 1;
    let down: Vec<i32> = up.iter().map(|x| -x).collect();
    let num = LPoly::monomial(Q::one(), up).add(&LPoly::monomial(-Q::one(), down));
    QRational::lpoly(num).mul(&QRational::inv_q_laurent(&laurent(&[(1, 1), (-1, -1)])))
}

fn int_of(r: &crate::rational::Rat, what: &str) -> Result<i32> {
    if r.is_integer() {
        Ok(r.to_integer() as i32)
    } else {
        Err(Error::Internal(format!("non-integral {what}")))
    }
}

/// Composite vectors are `e_γ = [e_α, e_β]_{q^D}` and
/// `e_{−γ} = [e_{−β}, e_{−α}]_{q^{−D}}` for `α ≺ γ ≺ β`; with `D = −1` the
/// factors multiply in the normal ordering.
const DEFORM: i32 = -1;

/// `x·y = swap·y·x + Σ c·w` over letter positions.
type Table = HashMap<(usize, usize), Commutation<QRational>>;

/// Relations of `U_q(g)` in the PBW basis of one normal ordering.
pub struct QuantumRelations {
    system: RootSystem,
    ordering: NormalOrdering,
    letters: Vec<Letter>,
    names: Vec<String>,
    /// Position of a composite letter ↦ `(c, word)` terms of its definition.
    definitions: BTreeMap<usize, Vec<(QRational, Vec<usize>)>>,
    table: RefCell<Table>,
    a: RefCell<Vec<QRational>>,
}

impl QuantumRelations {
    fn sign(&self, x: usize, y: usize) -> i64 {
        if self.letters[x].parity & self.letters[y].parity == 1 {
            -1
        } else {
            1
        }
    }

    /// `(−1)^{ϑϑ′} q^{e}` as a coefficient.
    fn signed_q(&self, x: usize, y: usize, e: i32) -> QRational {
        QRational::monomial(q(self.sign(x, y)), vec![e])
    }

    fn form(&self, x: usize, y: usize) -> i32 {
        let v = self.system.form(&self.letters[x].coords, &self.letters[y].coords);
        v.to_integer() as i32
    }

    fn set(&self, x: usize, y: usize, c: Commutation<QRational>) {
        self.table.borrow_mut().insert((x, y), c);
    }

    /// `a(γ)` per root, indexed like the ordering.
    pub fn a_values(&self) -> Vec<QRational> {
        self.a.borrow().clone()
    }

    pub fn a_of(&self, root: usize) -> QRational {
        let k = self.ordering.roots.iter().position(|r| *r == root).expect("root in ordering");
        self.a.borrow()[k].clone()
    }

    /// Defining word expansion of a letter; a single letter for simple roots.
    pub fn definition(&self, p: usize) -> Vec<(QRational, Vec<usize>)> {
        match self.definitions.get(&p) {
            Some(d) => d.clone(),
            None => vec![(QRational::one(), vec![p])],
        }
    }

    pub fn raising_position(&self, root: usize) -> usize {
        let k = self.ordering.roots.iter().position(|r| *r == root).unwrap();
        self.ordering.len() + k
    }

    pub fn lowering_position(&self, root: usize) -> usize {
        let k = self.ordering.roots.iter().position(|r| *r == root).unwrap();
        self.ordering.len() - 1 - k
    }
}

impl Relations for QuantumRelations {
    type Coeff = QRational;

    fn system(&self) -> &RootSystem {
        &self.system
    }

    fn ordering(&self) -> &NormalOrdering {
        &self.ordering
    }

    fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn var_names(&self) -> Vec<String> {
        self.names.clone()
    }

    fn commute(&self, x: usize, y: usize) -> Commutation<QRational> {
        self.table
            .borrow()
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| panic!("quantum relation for letters ({x}, {y}) requested before it was derived"))
    }
}

fn check_supported(spec: &AlgebraSpec) -> Result<()> {
    match spec.family {
        Family::A(1) | Family::A(2) | Family::Osp12 => Ok(()),
        _ if spec.rank > 2 => Err(Error::UnsupportedRank(format!("{spec} has rank {}", spec.rank))),
        _ => Err(Error::UnsupportedAlgebra(format!("no quantum construction for {spec}"))),
    }
}

fn terms_to_extra(engine: &QuantumEngine, nf: Vec<(Monomial, QRational)>) -> Commutation<QRational> {
    Commutation {
        swap: QRational::zero(),
        extra: nf.into_iter().map(|(m, c)| (c, engine.word_of(&m))).collect(),
    }
}

fn unit_with(engine: &QuantumEngine, p: usize) -> Monomial {
    let mut m = engine.unit();
    m[p] += 1;
    m
}

/// Normal form of `Σ c·w` multiplying letters in from the right.
fn right_to_left(engine: &QuantumEngine, words: &[(QRational, Vec<usize>)], tail: &Monomial) -> Vec<(Monomial, QRational)> {
    let mut acc: BTreeMap<Monomial, QRational> = BTreeMap::new();
    for (c, w) in words {
        for (m, d) in engine.insert_word(w, tail) {
            let e = acc.entry(m).or_insert_with(QRational::zero);
            *e = e.add(&c.mul(&d));
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Normal form of `Σ c·w` multiplying letters in from the left end.
fn left_to_right(engine: &QuantumEngine, words: &[(QRational, Vec<usize>)]) -> Vec<(Monomial, QRational)> {
    let mut acc: BTreeMap<Monomial, QRational> = BTreeMap::new();
    for (c, w) in words {
        let mut cur: BTreeMap<Monomial, QRational> = BTreeMap::new();
        cur.insert(engine.unit(), c.clone());
        for &x in w {
            let target = unit_with(engine, x);
            let mut next: BTreeMap<Monomial, QRational> = BTreeMap::new();
            for (m, a) in cur {
                for (m2, b) in engine.insert_word(&engine.word_of(&m), &target) {
                    let e = next.entry(m2).or_insert_with(QRational::zero);
                    *e = e.add(&a.mul(&b));
                }
            }
            cur = next;
        }
        for (m, a) in cur {
            let e = acc.entry(m).or_insert_with(QRational::zero);
            *e = e.add(&a);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The quantum Cartan–Weyl basis of `spec` along `ordering` (canonical if
/// `None`), with its relation table and the values `a(γ)`.
pub fn q_cartan_weyl(spec: &AlgebraSpec, ordering: Option<NormalOrdering>) -> Result<QuantumEngine> {
    check_supported(spec)?;
    let system = build_root_system(spec)?;
    let ordering = match ordering {
        Some(o) => o,
        None => crate::ordering::canonical(&system)?,
    };
    if !crate::ordering::validate(&ordering.roots, &system)? {
        return Err(Error::Parse("ordering is not normal".into()));
    }
    let letters = letters_for(&system, &ordering, |_| false);
    let n = ordering.len();
    let names: Vec<String> = if system.rank() == 1 {
        vec!["k_a".into()]
    } else {
        vec!["k_a".into(), "k_b".into()]
    };
    let mut rel = QuantumRelations {
        system,
        ordering,
        letters,
        names,
        definitions: BTreeMap::new(),
        table: RefCell::new(HashMap::new()),
        a: RefCell::new(Vec::new()),
    };
    // simple letters: raising n+k, lowering n−1−k
    let simple_index = |coords: &[i64]| rel.system.simple.iter().position(|s| s.coords == coords);
    for x in n..2 * n {
        for y in 0..n {
            let (lx, ly) = (&rel.letters[x], &rel.letters[y]);
            let neg: Vec<i64> = ly.coords.iter().map(|c| -c).collect();
            if let (Some(i), Some(j)) = (simple_index(&lx.coords), simple_index(&neg)) {
                let extra = if i == j { vec![(cartan_quotient(i), Vec::new())] } else { Vec::new() };
                let swap = QRational::from_q(q(rel.sign(x, y)));
                rel.set(x, y, Commutation { swap, extra });
            }
        }
    }
    if n == 3 {
        // ordering [α, γ, β] with γ = α + β
        let (ra, rg, rb) = (n, n + 1, n + 2);
        let (la, lg, lb) = (2, 1, 0);
        let ab = DEFORM * rel.form(ra, rb);
        let s_ab = rel.sign(ra, rb);
        let def_raise = vec![(QRational::one(), vec![ra, rb]), (rel.signed_q(ra, rb, ab).neg(), vec![rb, ra])];
        let def_lower = vec![(QRational::one(), vec![lb, la]), (rel.signed_q(la, lb, -ab).neg(), vec![la, lb])];
        rel.definitions.insert(rg, def_raise.clone());
        rel.definitions.insert(lg, def_lower.clone());
        let inv = QRational::from_q(q(s_ab)).mul(&QRational::q_power(-ab));
        rel.set(rb, ra, Commutation { swap: inv.clone(), extra: vec![(inv.neg(), vec![rg])] });
        rel.set(rg, ra, Commutation { swap: rel.signed_q(ra, rg, -DEFORM * rel.form(ra, rg)), extra: Vec::new() });
        rel.set(rb, rg, Commutation { swap: rel.signed_q(rg, rb, -DEFORM * rel.form(rg, rb)), extra: Vec::new() });
        let up = QRational::from_q(q(s_ab)).mul(&QRational::q_power(ab));
        rel.set(la, lb, Commutation { swap: up.clone(), extra: vec![(up.neg(), vec![lg])] });
        rel.set(la, lg, Commutation { swap: rel.signed_q(la, lg, DEFORM * rel.form(ra, rg)), extra: Vec::new() });
        rel.set(lg, lb, Commutation { swap: rel.signed_q(lg, lb, DEFORM * rel.form(rg, rb)), extra: Vec::new() });
        let engine = Engine::new(rel);
        let rel = &engine.rel;
        // simple raising × composite lowering
        for x in [ra, rb] {
            let words: Vec<_> = def_lower.iter().map(|(c, w)| (c.clone(), [vec![x], w.clone()].concat())).collect();
            rel.set(x, lg, terms_to_extra(&engine, left_to_right(&engine, &words)));
        }
        // composite raising × every lowering letter
        for y in [lb, la, lg] {
            let nf = right_to_left(&engine, &def_raise, &unit_with(&engine, y));
            rel.set(rg, y, terms_to_extra(&engine, nf));
        }
        derive_a(&engine)?;
        return Ok(engine);
    }
    let engine = Engine::new(rel);
    derive_a(&engine)?;
    Ok(engine)
}

/// Reads `a(γ)` off `e_γ e_{−γ} = σ e_{−γ} e_γ + a(γ)(k_γ − k_γ^{−1})/(q − q^{−1})`.
fn derive_a(engine: &QuantumEngine) -> Result<()> {
    let rel = &engine.rel;
    let mut out = Vec::new();
    for &root in &rel.ordering.roots {
        let (x, y) = (rel.raising_position(root), rel.lowering_position(root));
        let nf = engine.insert_left(x, &unit_with(engine, y));
        let mut swapped = unit_with(engine, y);
        swapped[x] += 1;
        let sigma = QRational::from_q(q(rel.sign(x, y)));
        let mut c0 = QRational::zero();
        for (m, c) in nf.iter() {
            if *m == swapped && *c == sigma {
                continue;
            }
            if *m != engine.unit() {
                return Err(Error::Internal(format!(
                    "[e_γ, e_−γ] leaves the Cartan part for {}",
                    crate::rootsys::root_label(&rel.system.reduced[root].coords)
                )));
            }
            c0 = c.clone();
        }
        let gamma: Vec<i32> = rel.system.reduced[root].coords.iter().map(|c| *c as i32).collect();
        let a = c0
            .mul(&QRational::lpoly(laurent(&[(1, 1), (-1, -1)])))
            .mul(&QRational::inv_binomial(gamma, 0, 1));
        if !a.is_k_free() || a.is_zero() {
            return Err(Error::Internal(format!("a(γ) is not a nonzero function of q: {a:?}")));
        }
        out.push(a);
    }
    *rel.a.borrow_mut() = out;
    Ok(())
}

/// `[x, y]_q = xy − (−1)^{ϑϑ′} q^{(α,β)} yx` for homogeneous elements of
/// weights `α`, `β` and parities `ϑ`, `ϑ′`.
pub fn q_commutator(
    engine: &QuantumEngine,
    x: &QElement,
    y: &QElement,
    weights: (&[i64], &[i64]),
    parities: (u8, u8),
) -> Result<QElement> {
    let e = engine.rel.system.form(weights.0, weights.1).to_integer() as i32;
    let sign = if parities.0 & parities.1 == 1 { -1 } else { 1 };
    let c = QRational::monomial(q(sign), vec![e]);
    engine.multiply(x, y)?.sub(&engine.multiply(y, x)?.scale(&c))
}

/// Letter element `e_{±γ}` with the given signed coordinates.
pub fn q_root_vector(engine: &QuantumEngine, coords: &[i64], grade: u32) -> Result<QElement> {
    engine.root_vector(coords, grade)
}

/// Names the Serre relations that fail; empty for a consistent table.
pub fn serre_failures(engine: &QuantumEngine, grade: u32) -> Result<Vec<String>> {
    let rs = &engine.rel.system;
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        for i in 0..rs.rank() {
            for j in 0..rs.rank() {
                if i == j {
                    continue;
                }
                let ci: Vec<i64> = rs.simple[i].coords.iter().map(|c| c * sign).collect();
                let cj: Vec<i64> = rs.simple[j].coords.iter().map(|c| c * sign).collect();
                let aii = rs.form(&ci, &ci).to_integer();
                let aij = rs.form(&ci, &cj).to_integer();
                let nij = if aii == 0 { if aij == 0 { 1 } else { 2 } } else { 1 - 2 * aij / aii };
                let ei = engine.root_vector(&ci, grade)?;
                let mut acc = engine.root_vector(&cj, grade)?;
                let mut w = cj.clone();
                let mut par = rs.simple[j].parity;
                for _ in 0..nij {
                    acc = q_commutator(engine, &ei, &acc, (&ci, &w), (rs.simple[i].parity, par))?;
                    w = w.iter().zip(&ci).map(|(a, b)| a + b).collect();
                    par ^= rs.simple[i].parity;
                }
                if !acc.is_zero() {
                    out.push(format!("(ad_q e[{}])^{nij} e[{}]", crate::rootsys::root_label(&ci), crate::rootsys::root_label(&cj)));
                }
            }
        }
    }
    Ok(out)
}

/// Coefficients of `e_{−γ}^m e_γ^m` in `p_γ` for `m ≤ max_m`.
pub fn q_factor_coefficients(engine: &QuantumEngine, root: usize, max_m: u32) -> Result<Vec<QRational>> {
    let rs = &engine.rel.system;
    let g = &rs.reduced[root];
    let t = int_of(&rs.form(&g.coords, &g.coords), "(γ,γ)")?;
    let rho = int_of(&rs.rho_of(&g.coords), "ρ(γ)")?;
    if t % 2 != 0 {
        return Err(Error::Internal("odd (γ,γ)".into()));
    }
    let theta = g.parity as i32;
    let gamma: Vec<i32> = g.coords.iter().map(|c| *c as i32).collect();
    let a_inv = engine
        .rel
        .a_of(root)
        .as_urational()
        .map(|a| QRational::from_urational(&a.inv()))
        .ok_or_else(|| Error::Internal("a(γ) depends on k".into()))?;
    let qq = laurent(&[(1, 1), (-1, -1)]);
    let max_m = if g.color == crate::rootsys::Color::Grey { max_m.min(1) } else { max_m };
    let qbar_sign: i8 = if theta == 1 { -1 } else { 1 };
    let mut out = Vec::new();
    for m in 0..=max_m {
        let mi = m as i32;
        let e = -(mi * (mi - 3) * t) / 4 - mi * rho;
        let mut c = QRational::lpoly(pow(&qq, m).mul(&LPoly::monomial(Q::one(), vec![e])));
        for _ in 0..m {
            c = c.mul(&a_inv);
        }
        for l in 1..=mi {
            let s: i8 = if (l - 1) * theta % 2 == 1 { -1 } else { 1 };
            c = c.mul(&QRational::inv_binomial(gamma.clone(), rho + l * t / 2, s));
        }
        let fact = q_factorial_base(m, qbar_sign, -t);
        c = c.mul(&QRational::inv_q_laurent(&fact));
        if m % 2 == 1 {
            c = c.neg();
        }
        out.push(c);
    }
    Ok(out)
}

/// The factor `p_γ` truncated at `grade`.
pub fn q_factor(engine: &QuantumEngine, root: usize, grade: u32) -> Result<QElement> {
    let g = &engine.rel.system.reduced[root];
    let step = g.coords.iter().copied().max().unwrap_or(1).max(1) as u32;
    let mut acc = engine.element(Vec::new(), grade);
    for (m, c) in q_factor_coefficients(engine, root, grade / step)?.into_iter().enumerate() {
        acc = acc.add(&engine.pair_term(root, m as u8, m as u8, c, grade))?;
    }
    Ok(acc)
}

/// `p = Π_γ p_γ` along the engine's normal ordering.
pub fn q_build(engine: &QuantumEngine, grade: u32) -> Result<QElement> {
    if grade < 1 {
        return Err(Error::Parse("grade must be at least 1".into()));
    }
    let factors = engine
        .rel
        .ordering
        .roots
        .iter()
        .map(|r| q_factor(engine, *r, grade))
        .collect::<Result<Vec<_>>>()?;
    engine.product(&factors)
}

/// Square matrix over `Q(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    pub n: usize,
    pub data: Vec<URational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            data: vec![URational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, URational::one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &URational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: URational) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut r = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = r.get(i, j).add(&a.mul(b));
                        r.set(i, j, v);
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        QMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &URational) -> Self {
        QMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(URational::is_zero)
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        let n = self.n * o.n;
        let mut r = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.n {
                    for l in 0..o.n {
                        r.set(i * o.n + k, j * o.n + l, a.mul(o.get(k, l)));
                    }
                }
            }
        }
        r
    }

    /// Entrywise value at `q = 1`.
    pub fn at_one(&self) -> std::result::Result<Matrix, Vec<(usize, usize, String)>> {
        let mut out = Matrix::zeros(self.n, self.n);
        let mut bad = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                match self.get(i, j).at_one() {
                    Ok(v) => out[(i, j)] = v,
                    Err(_) => bad.push((i, j, self.get(i, j).render())),
                }
            }
        }
        if bad.is_empty() {
            Ok(out)
        } else {
            Err(bad)
        }
    }
}

/// Weight module of `U_q(g)` given by its Chevalley action.
#[derive(Debug, Clone)]
pub struct QModule {
    pub labels: Vec<String>,
    /// Exponents `λ_i` with `k_i ↦ q^{λ_i}`.
    pub weights: Vec<Vec<i64>>,
    /// `e_{α_i}` per simple root.
    pub raise: Vec<QMatrix>,
    /// `e_{−α_i}` per simple root.
    pub lower: Vec<QMatrix>,
}

impl QModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn k_power(&self, i: usize, sign: i64) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim());
        for (r, w) in self.weights.iter().enumerate() {
            m.set(r, r, URational::q_power(q(1), sign * w[i]));
        }
        m
    }
}

/// Spin `two_j/2` module of `U_q(sl2)`: `F v_k = v_{k+1}`,
/// `E v_k = [k][2j−k+1] v_{k−1}`.
pub fn q_spin(two_j: u32) -> QModule {
    let n = two_j as usize + 1;
    let tj = two_j as i64;
    let mut e = QMatrix::zeros(n);
    let mut f = QMatrix::zeros(n);
    for k in 0..n {
        if k + 1 < n {
            f.set(k + 1, k, URational::one());
        }
        if k > 0 {
            let kk = k as i64;
            e.set(k - 1, k, sym_number(kk).mul(&sym_number(tj - kk + 1)));
        }
    }
    QModule {
        labels: (0..n).map(|k| format!("v{k}")).collect(),
        weights: (0..n).map(|k| vec![tj - 2 * k as i64]).collect(),
        raise: vec![e],
        lower: vec![f],
    }
}

/// Three-dimensional module of `U_q(sl3)` on `v_0, v_1, v_2`.
pub fn q_defining_sl3() -> QModule {
    let unit = |i: usize, j: usize| {
        let mut m = QMatrix::zeros(3);
        m.set(i, j, URational::one());
        m
    };
    QModule {
        labels: (0..3).map(|k| format!("v{k}")).collect(),
        weights: vec![vec![1, 0], vec![-1, 1], vec![0, -1]],
        raise: vec![unit(0, 1), unit(1, 2)],
        lower: vec![unit(1, 0), unit(2, 1)],
    }
}

/// `Δe = e⊗1 + k⊗e`, `Δf = f⊗k^{−1} + 1⊗f`, `Δk = k⊗k`.
pub fn q_tensor(a: &QModule, b: &QModule) -> QModule {
    let (ia, ib) = (QMatrix::identity(a.dim()), QMatrix::identity(b.dim()));
    let r = a.raise.len();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
            weights.push(a.weights[i].iter().zip(&b.weights[j]).map(|(x, y)| x + y).collect());
        }
    }
    QModule {
        labels,
        weights,
        raise: (0..r)
            .map(|i| a.raise[i].kron(&ib).add(&a.k_power(i, 1).kron(&b.raise[i])))
            .collect(),
        lower: (0..r)
            .map(|i| a.lower[i].kron(&b.k_power(i, -1)).add(&ia.kron(&b.lower[i])))
            .collect(),
    }
}

/// The quantum module matching a classical module description.
pub fn q_module(spec: &AlgebraSpec, kind: &ModuleKind) -> Result<QModule> {
    match (spec.family, kind) {
        (Family::A(1), ModuleKind::Spin(tj)) => Ok(q_spin(*tj)),
        (Family::A(1), ModuleKind::Defining) => Ok(q_spin(1)),
        (Family::A(2), ModuleKind::Defining) => Ok(q_defining_sl3()),
        (_, ModuleKind::Tensor(a, b)) => Ok(q_tensor(&q_module(spec, a)?, &q_module(spec, b)?)),
        _ => Err(Error::UnsupportedAlgebra(format!("no quantum module {kind:?} for {spec}"))),
    }
}

/// Action of every letter, composite ones through their definitions.
fn letter_actions(engine: &QuantumEngine, m: &QModule) -> Vec<QMatrix> {
    let rel = &engine.rel;
    let simple: Vec<Option<QMatrix>> = rel
        .letters
        .iter()
        .map(|l| {
            let neg: Vec<i64> = l.coords.iter().map(|c| -c).collect();
            rel.system
                .simple
                .iter()
                .position(|s| s.coords == l.coords || s.coords == neg)
                .map(|i| if l.raising { m.raise[i].clone() } else { m.lower[i].clone() })
        })
        .collect();
    (0..rel.letters.len())
        .map(|p| match &simple[p] {
            Some(x) => x.clone(),
            None => {
                let mut acc = QMatrix::zeros(m.dim());
                for (c, w) in rel.definition(p) {
                    let c = c.as_urational().expect("definition coefficients depend on q only");
                    let prod = w.iter().fold(QMatrix::identity(m.dim()), |acc, x| acc.mul(simple[*x].as_ref().unwrap()));
                    acc = acc.add(&prod.scale(&c));
                }
                acc
            }
        })
        .collect()
}

/// Matrix of `x` on `m`; coefficients are evaluated on the row weight.
pub fn q_apply(engine: &QuantumEngine, x: &QElement, m: &QModule) -> Result<QMatrix> {
    let (out, singular) = q_apply_partial(engine, x, m)?;
    match singular.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(out),
    }
}

/// Like [`q_apply`], with singular columns left zero and listed.
pub fn q_apply_partial(engine: &QuantumEngine, x: &QElement, m: &QModule) -> Result<(QMatrix, Vec<(usize, Error)>)> {
    let acts = letter_actions(engine, m);
    let n = m.dim();
    let mut out = QMatrix::zeros(n);
    let mut singular: BTreeMap<usize, Error> = BTreeMap::new();
    for (mono, c) in &x.terms {
        let word = engine.word_of(mono);
        let mat = word.iter().fold(QMatrix::identity(n), |acc, p| acc.mul(&acts[*p]));
        if mat.is_zero() {
            continue;
        }
        let mut values: BTreeMap<usize, Result<URational>> = BTreeMap::new();
        for row in 0..n {
            for col in 0..n {
                let a = mat.get(row, col);
                if a.is_zero() || singular.contains_key(&col) {
                    continue;
                }
                match values.entry(row).or_insert_with(|| c.evaluate(&m.weights[row])) {
                    Ok(f) => {
                        let v = out.get(row, col).add(&a.mul(f));
                        out.set(row, col, v);
                    }
                    Err(e) => {
                        singular.insert(col, e.clone());
                    }
                }
            }
        }
    }
    for col in singular.keys() {
        for row in 0..n {
            out.set(row, *col, URational::zero());
        }
    }
    Ok((out, singular.into_iter().collect()))
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub schema: u32,
    pub algebra: String,
    pub dim: usize,
    pub grade: u32,
    /// Columns compared at `q = 1`.
    pub compared: Vec<usize>,
    /// Columns on which a projector coefficient is singular, with the reason.
    pub singular_columns: Vec<(usize, String)>,
    /// Entries with an uncancelled pole at `q = 1`, as `(row, col, value)`.
    pub poles_at_one: Vec<(usize, usize, String)>,
    /// Entries whose value at `q = 1` differs from the classical one.
    pub mismatches: Vec<(usize, usize)>,
    pub passed: bool,
}

/// Substitutes `q = 1` in the matrix of `p_q` on `qm` and compares it with
/// the classical projector matrix, column by column, on every column where
/// both are defined.
pub fn classical_limit_check(
    engine: &QuantumEngine,
    p_q: &QElement,
    qm: &QModule,
    classical: &Matrix,
    classical_singular: &[usize],
) -> Result<LimitReport> {
    let (m, qsing) = q_apply_partial(engine, p_q, qm)?;
    let n = qm.dim();
    let mut singular_columns: BTreeMap<usize, String> = qsing.into_iter().map(|(c, e)| (c, e.to_string())).collect();
    for c in classical_singular {
        singular_columns.entry(*c).or_insert_with(|| "classical coefficient singular".into());
    }
    let compared: Vec<usize> = (0..n).filter(|c| !singular_columns.contains_key(c)).collect();
    let mut poles_at_one = Vec::new();
    let mut mismatches = Vec::new();
    for &j in &compared {
        for i in 0..n {
            match m.get(i, j).at_one() {
                Ok(v) if v == classical[(i, j)] => {}
                Ok(_) => mismatches.push((i, j)),
                Err(_) => poles_at_one.push((i, j, m.get(i, j).render())),
            }
        }
    }
    Ok(LimitReport {
        schema: 1,
        algebra: engine.rel.system.spec.to_string(),
        dim: n,
        grade: p_q.grade,
        passed: !compared.is_empty() && poles_at_one.is_empty() && mismatches.is_empty(),
        compared,
        singular_columns: singular_columns.into_iter().collect(),
        poles_at_one,
        mismatches,
    })
}

/// Builds both projectors at `grade` and runs [`classical_limit_check`] on
/// the module `kind`.
pub fn limit_report(spec: &AlgebraSpec, kind: &ModuleKind, grade: u32) -> Result<LimitReport> {
    let qe = q_cartan_weyl(spec, None)?;
    let pq = q_build(&qe, grade)?;
    let qm = q_module(spec, kind)?;
    let ce = crate::projector::classical_engine(spec, None, crate::projector::RhoMode::Standard)?;
    let pc = crate::projector::build(&ce, grade, crate::projector::RhoMode::Standard)?;
    let cm: WeightModule = crate::modules::build_module(&ce.rel.table, kind)?;
    let (classical, csing) = crate::modules::apply_partial(&ce, &pc, &cm)?;
    let csing: Vec<usize> = csing.into_iter().map(|(c, _)| c).collect();
    classical_limit_check(&qe, &pq, &qm, &classical, &csing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projector::verify;

    fn spec(s: &str) -> AlgebraSpec {
        s.parse().unwrap()
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(3), laurent(&[(1, 0), (1, 1), (1, 2)]));
        assert_eq!(q_factorial(0), LPoly::constant(q(1)));
        assert_eq!(sym_number(2), URational::q_power(q(1), 1).add(&URational::q_power(q(1), -1)));
        assert_eq!(sym_number(-1), URational::constant(q(-1)));
    }

    #[test]
    fn sl2_factor_matches_closed_form() {
        let e = q_cartan_weyl(&spec("A1"), None).unwrap();
        assert!(e.rel.a_of(0).as_urational().unwrap() == URational::one());
        let c = q_factor_coefficients(&e, 0, 1).unwrap();
        let qq = QRational::lpoly(laurent(&[(1, 1), (-1, -1)]));
        let phi = qq.mul(&QRational::inv_binomial(vec![1], 2, 1));
        assert_eq!(c[1], phi.neg());
    }

    #[test]
    fn sl2_projector_verifies() {
        let e = q_cartan_weyl(&spec("A1"), None).unwrap();
        let p = q_build(&e, 4).unwrap();
        let r = verify(&e, &p).unwrap();
        assert!(r.passed, "{:?}", r.residuals);
    }

    #[test]
    fn sl3_and_osp_verify() {
        for (name, n) in [("sl3", 2), ("osp(1|2)", 3)] {
            let e = q_cartan_weyl(&spec(name), None).unwrap();
            assert!(serre_failures(&e, 3).unwrap().is_empty());
            let r = verify(&e, &q_build(&e, n).unwrap()).unwrap();
            assert!(r.passed, "{name}: {:?}", r.residuals);
        }
    }

    #[test]
    fn spin_half_limit() {
        let r = limit_report(&spec("sl2"), &ModuleKind::Spin(1), 2).unwrap();
        assert!(r.passed && r.singular_columns.is_empty());
    }

    #[test]
    fn unsupported() {
        assert!(matches!(q_cartan_weyl(&spec("A3"), None), Err(Error::UnsupportedRank(_))));
        assert!(matches!(q_cartan_weyl(&spec("B2"), None), Err(Error::UnsupportedAlgebra(_))));
    }
}
