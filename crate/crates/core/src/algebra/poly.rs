use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::{Field, Ring, ScalarMode};

/// Sparse exponent vector: sorted `(variable, exponent)` pairs.
pub type Monomial = Vec<(u32, u32)>;

/// Multivariate polynomial with coefficients in a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    terms: BTreeMap<Monomial, F>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> Poly<F> {
    pub fn constant(c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn var(index: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(index, 1)], F::one());
        Poly { terms }
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = slot.clone() + c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|&(_, e)| e).sum()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().map(|&(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn eval(&self, point: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for &(v, e) in m {
                for _ in 0..e {
                    t = t * point[v as usize].clone();
                }
            }
            acc + t
        })
    }

    pub fn derivative(&self, var: u32) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let Some(pos) = m.iter().position(|&(v, _)| v == var) else { continue };
            let e = m[pos].1;
            let mut dm = m.clone();
            if e == 1 {
                dm.remove(pos);
            } else {
                dm[pos].1 -= 1;
            }
            out.add_term(dm, c.clone() * F::from_i64(e as i64));
        }
        out
    }

    /// Substitutes fixed values for some variables.
    pub fn substitute(&self, values: &BTreeMap<u32, F>) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m {
                match values.get(&v) {
                    Some(x) => {
                        for _ in 0..e {
                            coef = coef * x.clone();
                        }
                    }
                    None => rest.push((v, e)),
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn render(&self, names: &[String], coef: impl Fn(&F) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut parts = vec![];
                if m.is_empty() || !c.is_one() {
                    parts.push(format!("({})", coef(c)));
                }
                for &(v, e) in m {
                    let name = &names[v as usize];
                    parts.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
                }
                parts.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Self;
    fn add(mut self, other: Self) -> Self {
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(mono_mul(m1, m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Field> Ring for Poly<F> {
    const EXACT: bool = F::EXACT;
    const MODE: ScalarMode = F::MODE;

    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Poly::constant(F::one())
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(F::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(Ring::magnitude).fold(0.0, f64::max)
    }
    fn to_c64(&self) -> Complex64 {
        self.terms.get(&Vec::new()).map_or(Complex64::new(0.0, 0.0), Ring::to_c64)
    }
}
