//! Truncated Taylor extension: PBW-ordered series with coefficients on the
//! left and a memoized straightening product.
//!
//! Letters are the root vectors `e_{±γ}` of the reduced system. Position
//! `n−1−k` holds `e_{−γ_k}` and position `n+k` holds `e_{γ_k}`, so a
//! canonical monomial reads `e_{−γ_{n−1}}… e_{−γ_0} e_{γ_0} … e_{γ_{n−1}}`.
//!
//! Straightening only ever rewrites an adjacent pair `x·y` with
//! `pos(x) > pos(y)`; the bracket terms have strictly lower total degree or
//! sit strictly between `x` and `y` in a convex order, so the rewrite
//! terminates.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde_json::{json, Value};

use num_traits::{One, Zero};

use crate::algebra::{StructureTable, Symbol};
use crate::coeff::{CartanRational, Coefficient};
use crate::error::{Error, Result};
use crate::ordering::NormalOrdering;
use crate::rational::{q, Q};
use crate::rootsys::{root_label, Color, RootSystem};

pub type Monomial = Vec<u8>;

#[derive(Debug, Clone)]
pub struct Letter {
    /// Index into the reduced positive system.
    pub root: usize,
    pub raising: bool,
    /// Signed root coordinates.
    pub coords: Vec<i64>,
    /// Substitution applied to a coefficient moved left past this letter.
    pub shift: Vec<i64>,
    pub parity: u8,
    /// Whether the letter squares to zero.
    pub nilpotent: bool,
}

/// `x·y = swap·y·x + Σ c_k·w_k` for letters with `pos(x) > pos(y)`.
#[derive(Debug, Clone)]
pub struct Commutation<C> {
    pub swap: C,
    pub extra: Vec<(C, Vec<usize>)>,
}

pub trait Relations {
    type Coeff: Coefficient;
    fn system(&self) -> &RootSystem;
    fn ordering(&self) -> &NormalOrdering;
    fn letters(&self) -> &[Letter];
    fn commute(&self, x: usize, y: usize) -> Commutation<Self::Coeff>;
    fn var_names(&self) -> Vec<String>;
}

pub fn letters_for(rs: &RootSystem, o: &NormalOrdering, nilpotent: impl Fn(usize) -> bool) -> Vec<Letter> {
    let n = o.len();
    (0..2 * n)
        .map(|p| {
            let (k, raising) = if p < n { (n - 1 - p, false) } else { (p - n, true) };
            let root = o.roots[k];
            let g = &rs.reduced[root];
            let coords: Vec<i64> = g.coords.iter().map(|c| if raising { *c } else { -c }).collect();
            let shift = rs.pairing(&coords).into_iter().map(|v| -v).collect();
            Letter {
                root,
                raising,
                coords,
                shift,
                parity: g.parity,
                nilpotent: nilpotent(root),
            }
        })
        .collect()
}

/// Finite sum `Σ c_m · m` truncated at a grade.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorElement<C> {
    pub terms: BTreeMap<Monomial, C>,
    pub grade: u32,
    pub ordering: Vec<usize>,
}

impl<C: Coefficient> TaylorElement<C> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.ordering != o.ordering {
            return Err(Error::OrderingMismatch);
        }
        if self.grade != o.grade {
            return Err(Error::TruncationMismatch(self.grade, o.grade));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            add_into(&mut r.terms, m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&C::one().neg()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = self.clone();
        r.terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), c.mul(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        r
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }
}

fn add_into<C: Coefficient>(acc: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Collects products per monomial and sums each group once.
struct Accum<C>(BTreeMap<Monomial, Vec<C>>);

impl<C: Coefficient> Accum<C> {
    fn new() -> Self {
        Accum(BTreeMap::new())
    }

    fn push(&mut self, m: &Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(m) {
            Some(v) => v.push(c),
            None => {
                self.0.insert(m.clone(), vec![c]);
            }
        }
    }

    fn finish(self) -> BTreeMap<Monomial, C> {
        self.0
            .into_iter()
            .filter_map(|(m, v)| {
                let c = C::sum(v);
                (!c.is_zero()).then_some((m, c))
            })
            .collect()
    }
}

type Expansion<C> = Rc<Vec<(Monomial, C)>>;

/// Straightening engine for one algebra and one normal ordering.
pub struct Engine<R: Relations> {
    pub rel: R,
    insert_cache: RefCell<HashMap<(usize, Monomial), Expansion<R::Coeff>>>,
    commute_cache: RefCell<HashMap<(usize, usize), Rc<Commutation<R::Coeff>>>>,
    product_cache: RefCell<HashMap<(Monomial, Monomial), Expansion<R::Coeff>>>,
}

impl<R: Relations> Engine<R> {
    pub fn new(rel: R) -> Self {
        Engine {
            rel,
            insert_cache: RefCell::default(),
            commute_cache: RefCell::default(),
            product_cache: RefCell::default(),
        }
    }

    pub fn size(&self) -> usize {
        self.rel.letters().len()
    }

    pub fn unit(&self) -> Monomial {
        vec![0; self.size()]
    }

    /// Position of `e_{±γ}` given its signed coordinates.
    pub fn position(&self, coords: &[i64]) -> Option<usize> {
        self.rel.letters().iter().position(|l| l.coords == coords)
    }

    pub fn grade_of(&self, m: &Monomial) -> u32 {
        let (low, high) = self.contents(m);
        low.max(high)
    }

    /// Largest simple-root coordinate of the lowering and of the raising part.
    pub fn contents(&self, m: &Monomial) -> (u32, u32) {
        let r = self.rel.system().rank();
        let mut low = vec![0i64; r];
        let mut high = vec![0i64; r];
        for (p, e) in m.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let l = &self.rel.letters()[p];
            let acc = if l.raising { &mut high } else { &mut low };
            for (a, c) in acc.iter_mut().zip(&l.coords) {
                *a += c.abs() * *e as i64;
            }
        }
        let top = |v: Vec<i64>| v.into_iter().max().unwrap_or(0) as u32;
        (top(low), top(high))
    }

    pub fn weight_of(&self, m: &Monomial) -> Vec<i64> {
        let mut w = vec![0i64; self.rel.system().rank()];
        for (p, e) in m.iter().enumerate() {
            for (a, c) in w.iter_mut().zip(&self.rel.letters()[p].coords) {
                *a += c * *e as i64;
            }
        }
        w
    }

    /// Shift a coefficient picks up when moved from right to left of `m`.
    pub fn shift_of(&self, m: &Monomial) -> Vec<i64> {
        let mut s = vec![0i64; self.rel.system().rank()];
        for (p, e) in m.iter().enumerate() {
            for (a, c) in s.iter_mut().zip(&self.rel.letters()[p].shift) {
                *a += c * *e as i64;
            }
        }
        s
    }

    fn commute(&self, x: usize, y: usize) -> Rc<Commutation<R::Coeff>> {
        if let Some(c) = self.commute_cache.borrow().get(&(x, y)) {
            return c.clone();
        }
        let c = Rc::new(self.rel.commute(x, y));
        self.commute_cache.borrow_mut().insert((x, y), c.clone());
        c
    }

    /// Normal form of `letter · m` for a canonical monomial `m`.
    pub fn insert_left(&self, x: usize, m: &Monomial) -> Expansion<R::Coeff> {
        let key = (x, m.clone());
        if let Some(r) = self.insert_cache.borrow().get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.insert_uncached(x, m));
        self.insert_cache.borrow_mut().insert(key, r.clone());
        r
    }

    fn insert_uncached(&self, x: usize, m: &Monomial) -> Vec<(Monomial, R::Coeff)> {
        let one = R::Coeff::one();
        let first = m.iter().position(|e| *e > 0);
        match first {
            Some(y) if y < x => {
                let mut rest = m.clone();
                rest[y] -= 1;
                let comm = self.commute(x, y);
                let mut acc = Accum::new();
                if !comm.swap.is_zero() {
                    let shift = &self.rel.letters()[y].shift;
                    for (mk, ck) in self.insert_left(x, &rest).iter() {
                        let c = comm.swap.mul(&ck.shift(shift));
                        for (mj, dj) in self.insert_left(y, mk).iter() {
                            acc.push(mj, c.mul_raw(dj));
                        }
                    }
                }
                for (c, word) in &comm.extra {
                    for (mj, dj) in self.insert_word(word, &rest) {
                        acc.push(&mj, c.mul_raw(&dj));
                    }
                }
                acc.finish().into_iter().collect()
            }
            Some(y) if y == x && self.rel.letters()[x].nilpotent => Vec::new(),
            _ => {
                let mut out = m.clone();
                out[x] += 1;
                vec![(out, one)]
            }
        }
    }

    /// Normal form of `w_0 w_1 … w_k · m`.
    pub fn insert_word(&self, word: &[usize], m: &Monomial) -> Vec<(Monomial, R::Coeff)> {
        let mut cur: BTreeMap<Monomial, R::Coeff> = BTreeMap::new();
        cur.insert(m.clone(), R::Coeff::one());
        for &x in word.iter().rev() {
            let shift = &self.rel.letters()[x].shift;
            let mut next = Accum::new();
            for (mk, ck) in cur {
                let ck = ck.shift(shift);
                for (mj, dj) in self.insert_left(x, &mk).iter() {
                    next.push(mj, ck.mul_raw(dj));
                }
            }
            cur = next.finish();
        }
        cur.into_iter().collect()
    }

    pub fn word_of(&self, m: &Monomial) -> Vec<usize> {
        m.iter()
            .enumerate()
            .flat_map(|(p, e)| std::iter::repeat(p).take(*e as usize))
            .collect()
    }

    fn monomial_product(&self, a: &Monomial, b: &Monomial) -> Expansion<R::Coeff> {
        let key = (a.clone(), b.clone());
        if let Some(r) = self.product_cache.borrow().get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.insert_word(&self.word_of(a), b));
        self.product_cache.borrow_mut().insert(key, r.clone());
        r
    }

    pub fn element(&self, terms: Vec<(Monomial, R::Coeff)>, grade: u32) -> TaylorElement<R::Coeff> {
        let mut t = BTreeMap::new();
        for (m, c) in terms {
            if self.grade_of(&m) <= grade {
                add_into(&mut t, m, c);
            }
        }
        TaylorElement {
            terms: t,
            grade,
            ordering: self.rel.ordering().roots.clone(),
        }
    }

    pub fn one(&self, grade: u32) -> TaylorElement<R::Coeff> {
        self.constant(R::Coeff::one(), grade)
    }

    pub fn constant(&self, c: R::Coeff, grade: u32) -> TaylorElement<R::Coeff> {
        self.element(vec![(self.unit(), c)], grade)
    }

    /// The single letter `e_{±γ}` with the given signed coordinates.
    pub fn root_vector(&self, coords: &[i64], grade: u32) -> Result<TaylorElement<R::Coeff>> {
        let p = self
            .position(coords)
            .ok_or_else(|| Error::UnknownRoot(root_label(coords)))?;
        let mut m = self.unit();
        m[p] = 1;
        Ok(self.element(vec![(m, R::Coeff::one())], grade))
    }

    /// `c · e_{−γ}^a e_γ^b`.
    pub fn pair_term(&self, root: usize, a: u8, b: u8, c: R::Coeff, grade: u32) -> TaylorElement<R::Coeff> {
        let n = self.size() / 2;
        let k = self.rel.ordering().roots.iter().position(|r| *r == root).unwrap();
        let mut m = self.unit();
        m[n - 1 - k] = a;
        m[n + k] = b;
        self.element(vec![(m, c)], grade)
    }

    fn check(&self, x: &TaylorElement<R::Coeff>) -> Result<()> {
        if x.ordering != self.rel.ordering().roots {
            return Err(Error::OrderingMismatch);
        }
        Ok(())
    }

    pub fn multiply(
        &self,
        a: &TaylorElement<R::Coeff>,
        b: &TaylorElement<R::Coeff>,
    ) -> Result<TaylorElement<R::Coeff>> {
        self.check(a)?;
        a.same_shape(b)?;
        let grade = a.grade;
        let mut acc = Accum::new();
        for (ma, ca) in &a.terms {
            let shift = self.shift_of(ma);
            for (mb, cb) in &b.terms {
                let c = ca.mul(&cb.shift(&shift));
                for (m, d) in self.monomial_product(ma, mb).iter() {
                    if self.grade_of(m) <= grade {
                        acc.push(m, c.mul_raw(d));
                    }
                }
            }
        }
        Ok(TaylorElement {
            terms: acc.finish(),
            grade,
            ordering: a.ordering.clone(),
        })
    }

    /// `Σ a_i · b_i` truncated at the common grade, summed in one pass.
    pub fn sum_of_products<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a TaylorElement<R::Coeff>, &'a TaylorElement<R::Coeff>)>,
        grade: u32,
    ) -> Result<TaylorElement<R::Coeff>>
    where
        R::Coeff: 'a,
    {
        let mut acc = Accum::new();
        for (a, b) in pairs {
            self.check(a)?;
            a.same_shape(b)?;
            if a.grade != grade {
                return Err(Error::TruncationMismatch(a.grade, grade));
            }
            for (ma, ca) in &a.terms {
                let shift = self.shift_of(ma);
                for (mb, cb) in &b.terms {
                    let c = ca.mul(&cb.shift(&shift));
                    for (m, d) in self.monomial_product(ma, mb).iter() {
                        if self.grade_of(m) <= grade {
                            acc.push(m, c.mul_raw(d));
                        }
                    }
                }
            }
        }
        Ok(TaylorElement {
            terms: acc.finish(),
            grade,
            ordering: self.rel.ordering().roots.clone(),
        })
    }

    /// `x · m`, keeping only result monomials accepted by `keep`.
    pub fn times_monomial(
        &self,
        x: &TaylorElement<R::Coeff>,
        m: &Monomial,
        keep: impl Fn(&Monomial) -> bool,
    ) -> TaylorElement<R::Coeff> {
        let mut acc = Accum::new();
        for (ma, ca) in &x.terms {
            for (r, d) in self.monomial_product(ma, m).iter() {
                if keep(r) {
                    acc.push(r, ca.mul_raw(d));
                }
            }
        }
        TaylorElement {
            terms: acc.finish(),
            grade: x.grade,
            ordering: x.ordering.clone(),
        }
    }

    /// Splits a canonical monomial into its lowering and raising parts.
    pub fn split(&self, m: &Monomial) -> (Monomial, Monomial) {
        let n = self.size() / 2;
        let mut low = m.clone();
        let mut high = m.clone();
        low[n..].iter_mut().for_each(|e| *e = 0);
        high[..n].iter_mut().for_each(|e| *e = 0);
        (low, high)
    }

    pub fn product(&self, factors: &[TaylorElement<R::Coeff>]) -> Result<TaylorElement<R::Coeff>> {
        let mut it = factors.iter();
        let mut acc = it.next().ok_or_else(|| Error::Internal("empty product".into()))?.clone();
        for f in it {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Re-expresses an element of `src` in this engine's PBW order.
    pub fn import<S: Relations<Coeff = R::Coeff>>(
        &self,
        src: &Engine<S>,
        x: &TaylorElement<R::Coeff>,
    ) -> Result<TaylorElement<R::Coeff>> {
        src.check(x)?;
        let map: Vec<usize> = src
            .rel
            .letters()
            .iter()
            .map(|l| {
                self.position(&l.coords)
                    .ok_or_else(|| Error::UnknownRoot(root_label(&l.coords)))
            })
            .collect::<Result<_>>()?;
        let mut acc = Accum::new();
        for (m, c) in &x.terms {
            let word: Vec<usize> = src.word_of(m).into_iter().map(|p| map[p]).collect();
            for (mj, dj) in self.insert_word(&word, &self.unit()) {
                acc.push(&mj, c.mul_raw(&dj));
            }
        }
        Ok(self.element(acc.finish().into_iter().collect(), x.grade))
    }

    fn letter_label(&self, p: usize) -> String {
        format!("e[{}]", root_label(&self.rel.letters()[p].coords))
    }

    pub fn monomial_text(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(p, e)| {
                if *e == 1 {
                    self.letter_label(p)
                } else {
                    format!("{}^{e}", self.letter_label(p))
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// One term per line, sorted by grade then monomial.
    pub fn to_text(&self, x: &TaylorElement<R::Coeff>) -> String {
        let names = self.rel.var_names();
        let mut out = String::new();
        for (m, c) in self.sorted_terms(x) {
            out.push_str(&format!("[{}] * {}\n", c.render(&names), self.monomial_text(m)));
        }
        out
    }

    fn sorted_terms<'a>(&self, x: &'a TaylorElement<R::Coeff>) -> Vec<(&'a Monomial, &'a R::Coeff)> {
        let mut ts: Vec<_> = x.terms.iter().collect();
        ts.sort_by_key(|(m, _)| (self.grade_of(m), (*m).clone()));
        ts
    }

    pub fn to_json(&self, x: &TaylorElement<R::Coeff>) -> Value {
        let names = self.rel.var_names();
        let rs = self.rel.system();
        let terms: Vec<Value> = self
            .sorted_terms(x)
            .into_iter()
            .map(|(m, c)| {
                let word: Vec<Value> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(p, e)| json!([self.rel.letters()[p].coords, e]))
                    .collect();
                json!({
                    "word": word,
                    "text": self.monomial_text(m),
                    "coeff": c.to_json(),
                    "coeff_text": c.render(&names),
                })
            })
            .collect();
        json!({
            "schema": 1,
            "algebra": rs.spec.to_string(),
            "ordering": self.rel.ordering().roots.iter().map(|r| rs.reduced[*r].coords.clone()).collect::<Vec<_>>(),
            "variables": names,
            "grade": x.grade,
            "terms": terms,
        })
    }

    /// Inverse of [`Engine::to_json`] for an engine with the same ordering.
    pub fn from_json(&self, v: &Value) -> Result<TaylorElement<R::Coeff>> {
        let bad = |what: &str| Error::Parse(format!("element JSON: {what}"));
        let grade = v.get("grade").and_then(Value::as_u64).ok_or_else(|| bad("grade"))? as u32;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let mut m = self.unit();
            for w in t.get("word").and_then(Value::as_array).ok_or_else(|| bad("word"))? {
                let coords: Vec<i64> = serde_json::from_value(w.get(0).cloned().ok_or_else(|| bad("letter"))?)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                let e = w.get(1).and_then(Value::as_u64).ok_or_else(|| bad("exponent"))?;
                let p = self
                    .position(&coords)
                    .ok_or_else(|| Error::UnknownRoot(root_label(&coords)))?;
                m[p] = u8::try_from(e).map_err(|_| bad("exponent"))?;
            }
            let c = R::Coeff::from_json(t.get("coeff").ok_or_else(|| bad("coeff"))?)?;
            terms.push((m, c));
        }
        Ok(self.element(terms, grade))
    }
}

/// Relations of `U(g)` read off a structure table.
pub struct ClassicalRelations {
    pub table: StructureTable,
    pub ordering: NormalOrdering,
    letters: Vec<Letter>,
    names: Vec<String>,
}

impl ClassicalRelations {
    pub fn new(table: StructureTable, ordering: NormalOrdering) -> Self {
        Self::with_names(table, ordering, Vec::new())
    }

    /// `extra` names variables after the Cartan ones.
    pub fn with_names(table: StructureTable, ordering: NormalOrdering, extra: Vec<String>) -> Self {
        let rs = &table.system;
        let letters = letters_for(rs, &ordering, |r| {
            let g = &rs.reduced[r];
            g.color == Color::Grey
        });
        let mut names = cartan_names(rs.rank());
        names.extend(extra);
        ClassicalRelations {
            letters,
            ordering,
            names,
            table,
        }
    }

    /// Expresses a root vector as a word of letters times a scalar.
    fn root_word(&self, s: Symbol) -> (Q, Vec<usize>) {
        let coords = self.table.weight(s);
        if let Some(p) = self.letters.iter().position(|l| l.coords == coords) {
            return (Q::one(), vec![p]);
        }
        let half: Vec<i64> = coords.iter().map(|c| c / 2).collect();
        let p = self
            .letters
            .iter()
            .position(|l| l.coords == half)
            .expect("root vector outside the reduced system is a doubled root");
        let hs = self.table.symbol_of(&half).unwrap();
        let c = match self.table.bracket(hs, hs).unwrap().as_slice() {
            [(t, c)] if *t == s => c.clone(),
            _ => panic!("doubled root not generated by its half"),
        };
        // [e, e] = 2e² = c·e_{2γ}
        (Q::from_integer(2.into()) / c, vec![p, p])
    }
}

pub fn cartan_names(rank: usize) -> Vec<String> {
    if rank <= 2 {
        ["h_a", "h_b"][..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("h{i}")).collect()
    }
}

impl Relations for ClassicalRelations {
    type Coeff = CartanRational;

    fn system(&self) -> &RootSystem {
        &self.table.system
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

    fn commute(&self, x: usize, y: usize) -> Commutation<CartanRational> {
        let (lx, ly) = (&self.letters[x], &self.letters[y]);
        let sx = self.table.symbol_of(&lx.coords).unwrap();
        let sy = self.table.symbol_of(&ly.coords).unwrap();
        let sign = if lx.parity & ly.parity == 1 { -1 } else { 1 };
        let mut cartan = Vec::new();
        let mut extra = Vec::new();
        for (s, c) in self.table.bracket(sx, sy).unwrap() {
            match s {
                Symbol::Cartan(i) => cartan.push((*i, c.clone())),
                _ => {
                    let (f, word) = self.root_word(*s);
                    extra.push((CartanRational::from_q(c * f), word));
                }
            }
        }
        if !cartan.is_empty() {
            extra.push((CartanRational::linear(&cartan, Q::zero()), Vec::new()));
        }
        Commutation {
            swap: CartanRational::from_q(q(sign)),
            extra,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::realize;
    use crate::ordering::canonical;

    fn engine(name: &str) -> Engine<ClassicalRelations> {
        let t = realize(&name.parse().unwrap()).unwrap();
        let o = canonical(&t.system).unwrap();
        Engine::new(ClassicalRelations::new(t, o))
    }

    #[test]
    fn su2_transposition() {
        let e = engine("A1");
        let x = e.root_vector(&[1], 4).unwrap();
        let y = e.root_vector(&[-1], 4).unwrap();
        let xy = e.multiply(&x, &y).unwrap();
        let expect = e
            .multiply(&y, &x)
            .unwrap()
            .add(&e.constant(CartanRational::var(0), 4))
            .unwrap();
        assert_eq!(xy, expect);
        // f(h)·e_α = e_α·f(h+2) ⇔ e_α·f(h) = f(h−2)·e_α
        let h = e.constant(CartanRational::var(0), 4);
        let eh = e.multiply(&x, &h).unwrap();
        let m = e.multiply(&e.constant(CartanRational::linear(&[(0, q(1))], q(-2)), 4), &x).unwrap();
        assert_eq!(eh, m);
    }

    #[test]
    fn grey_square_vanishes() {
        let e = engine("gl(1|1)");
        let x = e.root_vector(&[1], 3).unwrap();
        assert!(e.multiply(&x, &x).unwrap().is_zero());
        let y = e.root_vector(&[-1], 3).unwrap();
        assert!(e.multiply(&y, &y).unwrap().is_zero());
        // odd pair anticommutes up to h
        let xy = e.multiply(&x, &y).unwrap();
        let yx = e.multiply(&y, &x).unwrap();
        let h = e.constant(CartanRational::var(0), 3);
        assert_eq!(xy.add(&yx).unwrap(), h);
    }

    #[test]
    fn mismatches() {
        let e = engine("A2");
        let a = e.one(3);
        let b = e.one(4);
        assert!(matches!(e.multiply(&a, &b), Err(Error::TruncationMismatch(3, 4))));
        let mut c = e.one(3);
        c.ordering.reverse();
        assert!(matches!(e.multiply(&c, &a), Err(Error::OrderingMismatch)));
    }

    #[test]
    fn json_round_trip() {
        let e = engine("B2");
        let x = e.root_vector(&[1, 1], 4).unwrap();
        let y = e.root_vector(&[-1, -2], 4).unwrap();
        let z = e
            .multiply(&e.multiply(&x, &y).unwrap(), &e.root_vector(&[0, 1], 4).unwrap())
            .unwrap();
        assert_eq!(e.from_json(&e.to_json(&z)).unwrap(), z);
        assert!(!e.to_text(&z).is_empty());
    }
}
