//! Direct evaluation of the α and β coefficients, written out formula by
//! formula with explicit loops over the auxiliary levels. Shares nothing with
//! the addend tables in the library.

#![allow(dead_code)]

use mptrap_core::couplings::CouplingInputs;
use mptrap_core::Complex64;
use rand::Rng;

pub struct Toy {
    pub omega: Vec<f64>,
    pub lf: Vec<Complex64>,
    pub vac: Vec<Complex64>,
    pub lower: usize,
    pub upper: usize,
    pub omega_bar: f64,
}

impl Toy {
    pub fn random(rng: &mut impl Rng) -> Self {
        let n = rng.gen_range(3..=7);
        let w21 = 2.4e15 * rng.gen_range(0.6..1.4);
        let mut levels: Vec<f64> = vec![0.0, w21];
        while levels.len() < n {
            let w = rng.gen_range(0.05..2.0) * w21;
            // Keep auxiliary levels clear of the ω_k ± few·ω̄ resonances.
            if levels.iter().all(|x| (x - w).abs() > 0.02 * w21) && (w - w21).abs() > 0.05 * w21 {
                levels.push(w);
            }
        }
        // Scatter the main levels through the index range.
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut omega = vec![0.0; n];
        for (slot, &pos) in order.iter().enumerate() {
            omega[pos] = levels[slot] + 1.0e14;
        }
        let mut c = |scale: f64| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        let lf = (0..n * n).map(|_| c(1e11)).collect();
        let vac = (0..n * n).map(|_| c(1.0)).collect();
        Self {
            omega,
            lf,
            vac,
            lower: order[0],
            upper: order[1],
            omega_bar: 10f64.powf(rng.gen_range(2.0..11.0)),
        }
    }

    pub fn inputs(&self) -> CouplingInputs {
        let n = self.omega.len();
        CouplingInputs {
            omega: self.omega.clone(),
            lf: self.lf.clone(),
            vac: self.vac.clone(),
            lower: self.lower,
            upper: self.upper,
            aux: (0..n).filter(|&i| i != self.lower && i != self.upper).collect(),
            ids: (1..=n as u32).collect(),
            omega_bar: self.omega_bar,
            guard: 0.0,
        }
    }

    fn aux(&self) -> Vec<usize> {
        (0..self.omega.len())
            .filter(|&i| i != self.lower && i != self.upper)
            .collect()
    }
}

pub struct Evaluated {
    pub alpha: [Complex64; 13],
    pub beta: [Complex64; 4],
}

struct Acc(Complex64);

impl Acc {
    fn new() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }
    fn add(&mut self, z: Complex64) {
        self.0 += z;
    }
}

pub fn evaluate(toy: &Toy, wk: f64) -> Evaluated {
    let n = toy.omega.len();
    // Level "1" and "2" of the printed formulas.
    let (o, t) = (toy.lower, toy.upper);
    let l = |a: usize, b: usize| toy.lf[a * n + b];
    let lc = |a: usize, b: usize| toy.lf[a * n + b].conj();
    let lk = |a: usize, b: usize| toy.vac[a * n + b];
    let lkc = |a: usize, b: usize| toy.vac[a * n + b].conj();
    let wb = toy.omega_bar;
    let d = toy.omega[t] - toy.omega[o] - (wk + wb);
    let dl = |j: usize| toy.omega[j] - toy.omega[o] - wk;
    let aux = toy.aux();

    let mut alpha: Vec<Acc> = (0..13).map(|_| Acc::new()).collect();
    alpha[0].add(lk(o, t));
    for &j in &aux {
        let dj = dl(j);
        alpha[1].add(l(t, j) * lk(j, o) / (d - dj));
        alpha[1].add(-l(t, j) * lk(j, o) / dj);
        alpha[1].add(-lk(t, j) * l(j, o) / (dj + wk - wb));
        alpha[1].add(lk(t, j) * l(j, o) / (d - dj - wk + wb));

        alpha[2].add(lk(j, o) * lc(t, j) / (d - dj));
        alpha[2].add(-lk(j, o) * lc(t, j) / (dj - 2.0 * wb));
        alpha[2].add(lk(t, j) * lc(j, o) / (d - dj - wk - wb));
        alpha[2].add(-lk(t, j) * lc(j, o) / (dj + wk - wb));

        alpha[3].add(-2.0 * lk(j, o) * lkc(o, j) / dj);
        alpha[4].add(-2.0 * lk(o, j) * lkc(j, o) / (dj + 2.0 * wk));
        alpha[5].add(-2.0 * l(j, o) * lc(o, j) / (dj + wk - wb));
        alpha[6].add(-2.0 * l(o, j) * lc(j, o) / (dj + wk + wb));
        alpha[7].add(2.0 * lk(j, t) * lkc(t, j) / (d - dj + wk + wb));
        alpha[8].add(2.0 * lk(t, j) * lkc(j, t) / (d - dj - wk + wb));
        alpha[9].add(2.0 * l(j, t) * lc(t, j) / (d - dj + 2.0 * wb));
        alpha[10].add(2.0 * l(t, j) * lc(j, t) / (d - dj));

        alpha[11].add(-l(o, j) * l(j, o) / (dj + wk - wb));
        alpha[11].add(-l(o, j) * l(j, o) / (dj + wk + wb));
        alpha[12].add(l(t, j) * l(j, t) / (d - dj));
        alpha[12].add(l(t, j) * l(j, t) / (d - dj + 2.0 * wb));
    }

    let mut beta: Vec<Acc> = (0..4).map(|_| Acc::new()).collect();
    // Addends that mention only j.
    for &j in &aux {
        let dj = dl(j);
        let b = &mut beta[0];
        b.add(l(t, j) * lkc(o, t) * lc(j, t) / (dj * (d - dj + wb)));
        b.add(l(o, t) * lkc(t, j) * lc(j, t) / (dj * (d - dj + wk + 2.0 * wb)));
        b.add(l(t, j) * lc(o, t) * lkc(j, t) / ((dj + wk - wb) * (d - dj + wb)));
        b.add(l(t, o) * lkc(j, o) * lc(j, o) / ((d - dj) * (dj + wk + 2.0 * wb)));
        b.add(l(j, o) * lc(t, o) * lkc(j, o) / ((d - dj - wk - wb) * (dj + 2.0 * wk + wb)));
        b.add(l(j, o) * lkc(t, o) * lc(j, o) / ((d - dj - wk - wb) * (dj + wk + 2.0 * wb)));

        let b = &mut beta[1];
        b.add(l(j, o) * lc(t, o) * lkc(j, o) / ((d - dj) * (dj + wk)));
        b.add(l(j, t) * lkc(o, t) * lc(t, j) / ((dj - 2.0 * wb) * (d - dj + 3.0 * wb)));
        b.add(l(j, o) * lkc(t, o) * lc(j, o) / ((dj + wk) * (d - dj - wk + wb)));
        b.add(l(t, o) * lkc(j, o) * lc(j, o) / ((d - dj - wk + wb) * (dj + 2.0 * wk + wb)));
        b.add(l(j, t) * lc(o, t) * lkc(t, j) / ((dj - 2.0 * wb) * (d - dj + wk + 2.0 * wb)));
        b.add(l(o, t) * lc(t, j) * lkc(j, t) / ((dj + wk - wb) * (d - dj + 3.0 * wb)));

        let b = &mut beta[2];
        b.add(l(t, o) * l(j, o) * lkc(j, o) / ((d - dj) * (dj + wk + 2.0 * wb)));
        b.add(l(t, j) * l(j, t) * lkc(o, t) / ((dj - 2.0 * wb) * (d - dj + 3.0 * wb)));
        b.add(l(o, t) * l(t, j) * lkc(j, t) / ((dj + wk - wb) * (d - dj + 3.0 * wb)));
        b.add(lkc(t, o) * l(j, o) * l(j, o) / ((d - dj - wk - wb) * (dj + wk + 2.0 * wb)));
        b.add(l(t, o) * l(j, o) * lkc(j, o) / ((d - dj - wk - wb) * (dj + 2.0 * wk + 3.0 * wb)));
        b.add(l(o, t) * l(j, t) * lkc(t, j) / ((dj - 2.0 * wb) * (d - dj + wk + 4.0 * wb)));

        let b = &mut beta[3];
        b.add(lc(o, t) * lkc(t, j) * lc(j, t) / (dj * (d - dj + wk)));
        b.add(lc(o, t) * lc(t, j) * lkc(j, t) / ((dj + wk - wb) * (d - dj + wb)));
        b.add(lc(t, o) * lkc(j, o) * lc(j, o) / ((d - dj) * (dj + wk)));
        b.add(lkc(o, t) * lc(t, j) * lc(j, t) / (dj * (d - dj + wb)));
        b.add(lkc(t, o) * lc(j, o) * lc(j, o) / ((dj + wk) * (d - dj - wk + wb)));
        b.add(lc(t, o) * lkc(j, o) * lc(j, o) / ((dj + 2.0 * wk - wb) * (d - dj - wk + wb)));
    }
    // Addends that mention both j and n.
    for &j in &aux {
        for &m in &aux {
            let (dj, dn) = (dl(j), dl(m));
            let b = &mut beta[0];
            b.add(l(o, j) * lkc(j, m) * lc(m, t) / (dn * (dj + wk)));
            b.add(l(j, m) * lc(j, t) * lkc(m, o) / ((d - dn) * (d - dj - wb)));
            b.add(l(m, t) * lkc(o, j) * lc(j, m) / ((dn - 2.0 * wb) * (dj - wb)));
            b.add(l(o, j) * lc(j, m) * lkc(m, t) / ((dj + wk) * (dn + wk - wb)));
            b.add(l(m, o) * lc(j, t) * lkc(j, m) / ((d - dj - wb) * (d - dn - wk - wb)));
            b.add(l(j, m) * lkc(j, t) * lc(m, o) / ((d - dj - wk) * (d - dn - wk + wb)));

            let b = &mut beta[1];
            b.add(l(m, t) * lc(o, j) * lkc(j, m) / ((dn - 2.0 * wb) * (dj + wk - 2.0 * wb)));
            b.add(l(j, m) * lkc(o, j) * lc(m, t) / (dn * (dj - wb)));
            b.add(l(m, o) * lkc(j, t) * lc(j, m) / ((d - dj - wk) * (d - dn - wk - wb)));
            b.add(l(j, t) * lc(j, m) * lkc(m, o) / ((d - dn) * (d - dj + wb)));
            b.add(l(j, m) * lc(o, j) * lkc(m, t) / ((dj + wk - 2.0 * wb) * (dn + wk - wb)));
            b.add(l(j, t) * lkc(j, m) * lc(m, o) / ((d - dj + wb) * (d - dn - wk + wb)));

            let b = &mut beta[2];
            b.add(l(j, m) * l(m, t) * lkc(o, j) / ((dj - 3.0 * wb) * (dn - 2.0 * wb)));
            b.add(l(o, j) * l(m, t) * lkc(j, m) / ((dn - 2.0 * wb) * (dj + wk - 2.0 * wb)));
            b.add(l(j, t) * l(j, m) * lkc(m, o) / ((d - dn) * (d - dj - wb)));
            b.add(l(j, m) * l(m, o) * lkc(j, t) / ((d - dj - wk - 2.0 * wb) * (d - dn - wk - wb)));
            b.add(l(j, t) * l(m, o) * lkc(j, m) / ((d - dj - wb) * (d - dn - wk - wb)));
            b.add(l(o, j) * l(j, m) * lkc(m, t) / ((dj + wk - 2.0 * wb) * (dn + wk - wb)));

            let b = &mut beta[3];
            b.add(lc(o, j) * lc(j, m) * lkc(m, t) / ((dj + wk) * (dn + wk - wb)));
            b.add(lc(j, t) * lc(j, m) * lkc(m, o) / ((d - dn) * (d - dj + wb)));
            b.add(lkc(o, j) * lc(j, m) * lc(m, t) / (dn * (dj + wb)));
            b.add(lc(o, j) * lkc(j, m) * lc(m, t) / (dn * (dj + wk)));
            b.add(lc(j, t) * lkc(j, m) * lc(m, o) / ((d - dj + wb) * (d - dn - wk + wb)));
            b.add(lkc(j, t) * lc(j, m) * lc(m, o) / ((d - dn - wk + wb) * (d - dj - wk + 2.0 * wb)));
        }
    }

    let mut out = Evaluated {
        alpha: [Complex64::new(0.0, 0.0); 13],
        beta: [Complex64::new(0.0, 0.0); 4],
    };
    for (slot, a) in out.alpha.iter_mut().zip(&alpha) {
        *slot = a.0;
    }
    for (slot, b) in out.beta.iter_mut().zip(&beta) {
        *slot = b.0;
    }
    out
}

/// Largest relative deviation between the engine and the direct evaluation
/// over all seventeen coefficients, with the coefficient name.
pub fn max_relative_deviation(toy: &Toy, wk: f64) -> (f64, String) {
    let inputs = toy.inputs();
    let engine = inputs.effective(wk).expect("toy denominators are well separated");
    let direct = evaluate(toy, wk);
    let mut worst = (0.0, String::new());
    let pairs = engine
        .alpha
        .iter()
        .zip(&direct.alpha)
        .enumerate()
        .map(|(i, (a, b))| (format!("alpha{i}"), *a, *b))
        .chain(
            engine
                .beta
                .iter()
                .zip(&direct.beta)
                .enumerate()
                .map(|(i, (a, b))| (format!("beta{}", i + 1), *a, *b)),
        );
    for (name, a, b) in pairs {
        let rel = (a - b).norm() / b.norm();
        if rel > worst.0 || !rel.is_finite() {
            worst = (rel, name);
        }
    }
    worst
}
