use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Shared layout for truncated Taylor expansions in `nvars` variables up to
/// total `order`: slot numbering for the multi-indices, the product table,
/// and per-slot factorials. Built once per (nvars, order) and cached.
pub struct JetSpace {
    nvars: usize,
    order: u8,
    exps: Vec<Vec<u8>>,
    slot: HashMap<Vec<u8>, u32>,
    /// per left slot: (right slot, product slot) for every admissible pair
    mul: Vec<Vec<(u32, u32)>>,
    /// α! per slot
    fact: Vec<f64>,
    degree: Vec<u8>,
}

impl JetSpace {
    pub fn get(nvars: usize, order: u8) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u8), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet space cache poisoned");
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(JetSpace::build(nvars, order)))
            .clone()
    }

    fn build(nvars: usize, order: u8) -> JetSpace {
        assert!(nvars > 0, "jet space needs at least one variable");
        let mut exps = Vec::new();
        let mut prefix = Vec::with_capacity(nvars);
        for d in 0..=order {
            compositions(nvars, d, &mut prefix, &mut exps);
        }
        let slot: HashMap<Vec<u8>, u32> = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let degree: Vec<u8> = exps.iter().map(|e| e.iter().sum()).collect();
        let fact: Vec<f64> = exps
            .iter()
            .map(|e| e.iter().map(|&a| factorial(a)).product())
            .collect();
        // first slot index whose degree exceeds d, for each d
        let mut deg_end = vec![exps.len() as u32; order as usize + 1];
        for d in 0..=order {
            if let Some(pos) = degree.iter().position(|&g| g > d) {
                deg_end[d as usize] = pos as u32;
            }
        }
        let mut mul = Vec::with_capacity(exps.len());
        let mut target = vec![0u8; nvars];
        for (i, ei) in exps.iter().enumerate() {
            let room = order - degree[i];
            let mut pairs = Vec::new();
            for j in 0..deg_end[room as usize] as usize {
                for (t, (&a, &b)) in target.iter_mut().zip(ei.iter().zip(&exps[j])) {
                    *t = a + b;
                }
                pairs.push((j as u32, slot[&target]));
            }
            mul.push(pairs);
        }
        JetSpace { nvars, order, exps, slot, mul, fact, degree }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

fn compositions(nvars: usize, total: u8, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if nvars == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(nvars - 1, total - first, prefix, out);
        prefix.pop();
    }
}

/// Taylor expansion of a function at a point, truncated at the space's total
/// order: `c[slot(α)] = ∂^α f / α!`. Arithmetic on jets propagates these
/// coefficients exactly, so high-order derivatives of composite expressions
/// come out with no step-size noise.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, v: f64) -> Jet {
        let mut c = vec![0.0; space.len()];
        c[0] = v;
        Jet { space: space.clone(), c }
    }

    pub fn var(space: &Arc<JetSpace>, i: usize, value: f64) -> Jet {
        assert!(i < space.nvars, "variable index out of range");
        let mut jet = Jet::constant(space, value);
        if space.order >= 1 {
            let mut e = vec![0u8; space.nvars];
            e[i] = 1;
            jet.c[space.slot[&e] as usize] = 1.0;
        }
        jet
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        assert!(
            Arc::ptr_eq(&self.space, &other.space),
            "jets from different spaces"
        );
        let mut c = vec![0.0; self.space.len()];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for &(j, k) in &self.space.mul[i] {
                c[k as usize] += a * other.c[j as usize];
            }
        }
        Jet { space: self.space.clone(), c }
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(&self.space, 1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `e^{self}`, by expanding around the constant part.
    pub fn exp(&self) -> Jet {
        let a = self.c[0];
        let mut n = self.clone();
        n.c[0] = 0.0;
        let mut acc = Jet::constant(&self.space, 1.0);
        let mut term = Jet::constant(&self.space, 1.0);
        for k in 1..=self.space.order as u32 {
            term = term.mul(&n).scale(1.0 / k as f64);
            acc = acc.add(&term);
        }
        acc.scale(a.exp())
    }

    /// Composition `F(self)` from the outer function's Taylor coefficients at
    /// the jet's value: `series[k] = F⁽ᵏ⁾(value)/k!`, needed up to the
    /// space's order.
    pub fn compose_series(&self, series: &[f64]) -> Jet {
        assert!(
            series.len() > self.space.order as usize,
            "need order+1 outer coefficients"
        );
        let mut n = self.clone();
        n.c[0] = 0.0;
        let mut acc = Jet::constant(&self.space, series[0]);
        let mut pw = Jet::constant(&self.space, 1.0);
        for k in 1..=self.space.order as usize {
            pw = pw.mul(&n);
            acc = acc.add(&pw.scale(series[k]));
        }
        acc
    }

    /// `∂^α` at the expansion point.
    pub fn deriv(&self, alpha: &[u8]) -> f64 {
        let s = self.space.slot[alpha] as usize;
        self.c[s] * self.space.fact[s]
    }

    /// Largest `|∂^α|` over all multi-indices of total order `u`.
    pub fn max_abs_deriv(&self, u: u8) -> f64 {
        let mut best = 0.0f64;
        for (s, &d) in self.space.degree.iter().enumerate() {
            if d == u {
                best = best.max((self.c[s] * self.space.fact[s]).abs());
            }
        }
        best
    }

    /// Sum of squared derivatives over every ordered derivative tuple whose
    /// first block (variables `0..split`) has order `u` and second block has
    /// order `v`; a multi-index `(α, β)` stands for `(u!/α!)(v!/β!)` tuples.
    pub fn frob_sq_split(&self, u: u8, v: u8, split: usize) -> f64 {
        let fu = factorial(u);
        let fv = factorial(v);
        let mut sum = 0.0;
        for (s, e) in self.space.exps.iter().enumerate() {
            let du: u8 = e[..split].iter().sum();
            let dv: u8 = e[split..].iter().sum();
            if du != u || dv != v {
                continue;
            }
            let d = self.c[s] * self.space.fact[s];
            sum += fu * fv / self.space.fact[s] * d * d;
        }
        sum
    }

    /// Sum of squared derivatives over all ordered tuples of total order `u`.
    pub fn frob_sq(&self, u: u8) -> f64 {
        self.frob_sq_split(u, 0, self.space.nvars)
    }
}
