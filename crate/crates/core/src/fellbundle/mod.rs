//! The non-associative Fell bundle of a tricharacter on the discrete torus
//! `(ℤ/N)ⁿ`, its convolution algebra, and the twisted kernel algebra it is
//! isomorphic to.
//!
//! Integrals are plain sums over the grid (counting measure).

mod suites;

pub use suites::{associator_suite, axioms_suite, norms_suite, phi_suite, SuiteConfig};

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{basis, binomial};
use crate::ring::CoefficientRing;

/// `f•(g•h) = χ(t∧u∧v)^σ · (f•g)•h` for sections on fibers `t, u, v`.
pub const ASSOCIATOR_ORIENTATION: i32 = -1;

/// Metadata describing how sums relate to integrals.
pub const MEASURE_NOTE: &str = "counting measure; multiply each sum by N^-n for Lebesgue normalization";

/// `(ℤ/N)ⁿ`, points enumerated row-major with the first coordinate slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    n: usize,
    period: u32,
    size: usize,
}

impl Grid {
    pub fn new(n: usize, period: u32) -> Result<Self> {
        if period < 2 {
            return Err(Error::PeriodIncompatible { period, reason: "grid period must be at least 2".into() });
        }
        if n == 0 {
            return Err(Error::GridMismatch("grid dimension must be positive".into()));
        }
        let size = (period as usize)
            .checked_pow(n as u32)
            .filter(|&s| s.checked_mul(s).is_some_and(|t| t <= 1 << 26))
            .ok_or_else(|| Error::GridMismatch(format!("grid ({period})^{n} too large")))?;
        Ok(Self { n, period, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    /// Number of grid points `Nⁿ`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let mut p = vec![0; self.n];
        for slot in p.iter_mut().rev() {
            *slot = (index % self.period as usize) as i64;
            index /= self.period as usize;
        }
        p
    }

    pub fn index(&self, p: &[i64]) -> usize {
        let m = self.period as i64;
        p.iter().fold(0, |acc, &x| acc * self.period as usize + x.rem_euclid(m) as usize)
    }

    fn add_table(&self) -> Vec<u32> {
        let pts: Vec<Vec<i64>> = (0..self.size).map(|i| self.point(i)).collect();
        let mut out = Vec::with_capacity(self.size * self.size);
        for a in &pts {
            for b in &pts {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.push(self.index(&s) as u32);
            }
        }
        out
    }

    fn neg_table(&self) -> Vec<u32> {
        (0..self.size)
            .map(|i| self.index(&self.point(i).iter().map(|x| -x).collect::<Vec<_>>()) as u32)
            .collect()
    }
}

/// `χ(ξ) = exp(2πi⟨m, ξ⟩/N)` on integral `ξ ∈ Λ³ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTricharacter {
    n: usize,
    period: u32,
    m: Vec<i64>,
}

impl GridTricharacter {
    pub fn new(n: usize, period: u32, m: Vec<i64>) -> Result<Self> {
        if m.len() != binomial(n, 3) {
            return Err(Error::CoefficientLength { expected: binomial(n, 3), found: m.len() });
        }
        Ok(Self { n, period, m })
    }

    pub fn trivial(n: usize, period: u32) -> Self {
        Self { n, period, m: vec![0; binomial(n, 3)] }
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    /// Exponent `⟨m, a∧b∧c⟩ mod N`.
    pub fn exponent(&self, a: &[i64], b: &[i64], c: &[i64]) -> u32 {
        let minors = crate::exterior::int_triple_minors(a, b, c);
        let v: i64 = self.m.iter().zip(minors).map(|(x, y)| x * y).sum();
        v.rem_euclid(self.period as i64) as u32
    }

    /// The linear form `c ↦ ⟨m, a∧b∧c⟩` as a coefficient vector.
    fn contract(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.n];
        for (idx, &m) in basis(self.n, 3).iter().zip(&self.m) {
            if m == 0 {
                continue;
            }
            let [i, j, k] = [idx[0], idx[1], idx[2]];
            // a∧b∧c at (i,j,k) = Σ over positions of c
            out[k] += m * (a[i] * b[j] - a[j] * b[i]);
            out[j] -= m * (a[i] * b[k] - a[k] * b[i]);
            out[i] += m * (a[j] * b[k] - a[k] * b[j]);
        }
        out
    }
}

/// A corruption of the `fiber_mult` phase, for negative controls: an extra
/// exponent as a function of `(t₁, t₂, s)`.
pub type PhasePerturbation = fn(&[i64], &[i64], &[i64]) -> i64;

/// A table `f(t, s)` on `grid × grid`; `t` is the fiber parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct FellSection<E> {
    grid: Grid,
    data: Vec<E>,
}

/// A table `K(x, y)` on `grid × grid`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<E> {
    grid: Grid,
    data: Vec<E>,
}

macro_rules! table_impl {
    ($ty:ident) => {
        impl<E: Clone> $ty<E> {
            pub fn new(grid: Grid, data: Vec<E>) -> Result<Self> {
                let expected = grid.size() * grid.size();
                if data.len() != expected {
                    return Err(Error::CoefficientLength { expected, found: data.len() });
                }
                Ok(Self { grid, data })
            }

            pub fn zero<R: CoefficientRing<Elem = E>>(ring: &R, grid: &Grid) -> Self {
                Self { grid: grid.clone(), data: vec![ring.zero(); grid.size() * grid.size()] }
            }

            pub fn random<R: CoefficientRing<Elem = E>, G: Rng>(ring: &R, grid: &Grid, rng: &mut G) -> Self {
                let data = (0..grid.size() * grid.size()).map(|_| ring.sample(rng)).collect();
                Self { grid: grid.clone(), data }
            }

            pub fn grid(&self) -> &Grid {
                &self.grid
            }

            pub fn data(&self) -> &[E] {
                &self.data
            }

            pub fn get(&self, a: usize, b: usize) -> &E {
                &self.data[a * self.grid.size() + b]
            }

            pub fn set(&mut self, a: usize, b: usize, v: E) {
                let g = self.grid.size();
                self.data[a * g + b] = v;
            }

            pub fn residual<R: CoefficientRing<Elem = E>>(&self, ring: &R, other: &Self) -> f64 {
                self.data.iter().zip(&other.data).map(|(a, b)| ring.residual(a, b)).fold(0.0, f64::max)
            }

            /// `{"n", "N", "data"}` with `data` row-major.
            pub fn to_json<R: CoefficientRing<Elem = E>>(&self, ring: &R) -> Value {
                json!({
                    "n": self.grid.n(),
                    "N": self.grid.period(),
                    "data": self.data.iter().map(|x| ring.to_json(x)).collect::<Vec<_>>(),
                })
            }

            pub fn from_json<R: CoefficientRing<Elem = E>>(ring: &R, v: &Value) -> Result<Self> {
                let field = |k: &str| v.get(k).ok_or_else(|| Error::Schema(format!("missing field `{k}`")));
                let n = field("n")?.as_u64().ok_or_else(|| Error::Schema("`n` must be an integer".into()))?;
                let p = field("N")?.as_u64().ok_or_else(|| Error::Schema("`N` must be an integer".into()))?;
                if p != ring.period() as u64 {
                    return Err(Error::GridMismatch(format!("table period {p} differs from ring period {}", ring.period())));
                }
                let grid = Grid::new(n as usize, p as u32)?;
                let data = field("data")?
                    .as_array()
                    .ok_or_else(|| Error::Schema("`data` must be an array".into()))?
                    .iter()
                    .map(|x| ring.from_json(x))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(grid, data)
            }
        }
    };
}

table_impl!(FellSection);
table_impl!(Kernel);

impl<E: Clone> FellSection<E> {
    /// `δ_{(t, s)}`.
    pub fn delta<R: CoefficientRing<Elem = E>>(ring: &R, grid: &Grid, t: &[i64], s: &[i64]) -> Self {
        let mut f = Self::zero(ring, grid);
        f.set(grid.index(t), grid.index(s), ring.one());
        f
    }

    /// A section supported on fiber `t` with the given slice.
    pub fn homogeneous<R: CoefficientRing<Elem = E>>(ring: &R, grid: &Grid, t: &[i64], slice: Vec<E>) -> Result<Self> {
        if slice.len() != grid.size() {
            return Err(Error::CoefficientLength { expected: grid.size(), found: slice.len() });
        }
        let mut f = Self::zero(ring, grid);
        let ti = grid.index(t);
        for (s, v) in slice.into_iter().enumerate() {
            f.set(ti, s, v);
        }
        Ok(f)
    }

    pub fn slice(&self, t: usize) -> &[E] {
        let g = self.grid.size();
        &self.data[t * g..(t + 1) * g]
    }
}

/// The Fell bundle of `χ` over `(ℤ/N)ⁿ` with coefficients in `R`.
#[derive(Clone, Debug)]
pub struct FellBundle<R: CoefficientRing> {
    ring: R,
    grid: Grid,
    chi: GridTricharacter,
    add: Vec<u32>,
    neg: Vec<u32>,
    points: Vec<Vec<i64>>,
    /// `points` flattened, `n` coordinates per point.
    flat: Vec<i64>,
    perturbation: Option<PhasePerturbation>,
}

impl<R: CoefficientRing> FellBundle<R> {
    pub fn new(ring: R, chi: GridTricharacter) -> Result<Self> {
        if ring.period() != chi.period {
            return Err(Error::GridMismatch(format!(
                "ring period {} differs from tricharacter period {}",
                ring.period(),
                chi.period
            )));
        }
        let grid = Grid::new(chi.n, chi.period)?;
        let points: Vec<Vec<i64>> = (0..grid.size()).map(|i| grid.point(i)).collect();
        let flat = points.concat();
        Ok(Self { add: grid.add_table(), neg: grid.neg_table(), ring, grid, chi, points, flat, perturbation: None })
    }

    /// Installs a corrupted phase for negative controls.
    pub fn with_perturbation(mut self, p: PhasePerturbation) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn chi(&self) -> &GridTricharacter {
        &self.chi
    }

    fn check_grid(&self, g: &Grid) -> Result<()> {
        if g != &self.grid {
            return Err(Error::GridMismatch(format!("{g:?} vs {:?}", self.grid)));
        }
        Ok(())
    }

    fn add_idx(&self, a: usize, b: usize) -> usize {
        self.add[a * self.grid.size() + b] as usize
    }

    fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg[b] as usize)
    }

    /// Exponent of `χ(a∧b∧c)` for point indices.
    pub fn chi_exp(&self, a: usize, b: usize, c: usize) -> u32 {
        self.chi.exponent(&self.points[a], &self.points[b], &self.points[c])
    }

    /// The linear form `s ↦ ⟨m, t₁∧t₂∧s⟩`, coefficients reduced into `[0, N)`.
    fn form(&self, t1: usize, t2: usize) -> Vec<i64> {
        let n = self.grid.period() as i64;
        self.chi.contract(&self.points[t1], &self.points[t2]).into_iter().map(|c| c.rem_euclid(n)).collect()
    }

    /// Exponent of the multiplication phase `E_{t₁} × E_{t₂} → E_{t₁+t₂}` at `s`,
    /// given `form = self.form(t1, t2)`.
    #[inline]
    fn mult_exp(&self, form: &[i64], t1: usize, t2: usize, s: usize) -> u32 {
        let v = self.eval_form(form, s);
        match self.perturbation {
            None => (v as u64 % self.grid.period() as u64) as u32,
            Some(p) => {
                let v = v + p(&self.points[t1], &self.points[t2], &self.points[s]);
                v.rem_euclid(self.grid.period() as i64) as u32
            }
        }
    }

    #[inline]
    fn eval_form(&self, form: &[i64], s: usize) -> i64 {
        let n = self.grid.n();
        form.iter().zip(&self.flat[s * n..(s + 1) * n]).map(|(x, y)| x * y).sum()
    }

    /// `(h₁·h₂)(s) = χ(t₁∧t₂∧s) h₁(s+t₂) h₂(s)`, a slice over `t₁+t₂`.
    pub fn fiber_mult(&self, t1: &[i64], t2: &[i64], h1: &[R::Elem], h2: &[R::Elem]) -> Result<Vec<R::Elem>> {
        let g = self.grid.size();
        if h1.len() != g || h2.len() != g || t1.len() != self.grid.n() || t2.len() != self.grid.n() {
            return Err(Error::GridMismatch("slice or fiber does not match the grid".into()));
        }
        let (a, b) = (self.grid.index(t1), self.grid.index(t2));
        let form = self.form(a, b);
        Ok((0..g)
            .map(|s| {
                let mut out = self.ring.zero();
                self.ring.mul_add_root(&mut out, &h1[self.add_idx(s, b)], &h2[s], self.mult_exp(&form, a, b, s));
                out
            })
            .collect())
    }

    /// Prepared operands for each nonzero row; `None` for zero rows.
    fn prepare(&self, data: &[R::Elem]) -> Vec<Option<Vec<R::Prepared>>> {
        data.chunks(self.grid.size())
            .map(|row| {
                row.iter()
                    .any(|x| !self.ring.is_zero(x))
                    .then(|| row.iter().map(|x| self.ring.prepare(x)).collect())
            })
            .collect()
    }

    fn convolve_row(&self, f: &[Option<Vec<R::Prepared>>], g: &[Option<Vec<R::Prepared>>], t: usize) -> Vec<R::Elem> {
        let size = self.grid.size();
        let mut row = self.ring.accumulator(size);
        for (r, frow) in f.iter().enumerate() {
            let tr = self.sub_idx(t, r);
            let (Some(frow), Some(grow)) = (frow, &g[tr]) else {
                continue;
            };
            let form = self.form(r, tr);
            let shift = &self.add[tr * size..(tr + 1) * size];
            for (s, b) in grow.iter().enumerate() {
                if self.ring.prepared_is_zero(b) {
                    continue;
                }
                let a = &frow[shift[s] as usize];
                if self.ring.prepared_is_zero(a) {
                    continue;
                }
                self.ring.accumulate(&mut row, s, a, b, self.mult_exp(&form, r, tr, s));
            }
        }
        self.ring.finish(&row)
    }

    /// `(f•g)(t, s) = Σ_r χ(r∧t∧s) f(r, s+t−r) g(t−r, s)`, summed in increasing `r`.
    pub fn convolve(&self, f: &FellSection<R::Elem>, g: &FellSection<R::Elem>) -> Result<FellSection<R::Elem>> {
        self.check_grid(&f.grid)?;
        self.check_grid(&g.grid)?;
        let (fp, gp) = (self.prepare(&f.data), self.prepare(&g.data));
        let data: Vec<R::Elem> = (0..self.grid.size())
            .into_par_iter()
            .flat_map_iter(|t| self.convolve_row(&fp, &gp, t))
            .collect();
        Ok(FellSection { grid: self.grid.clone(), data })
    }

    /// `f*(t, s) = conj f(−t, s+t)`.
    pub fn involute(&self, f: &FellSection<R::Elem>) -> Result<FellSection<R::Elem>> {
        self.check_grid(&f.grid)?;
        let g = self.grid.size();
        let data = (0..g * g)
            .map(|x| {
                let (t, s) = (x / g, x % g);
                self.ring.conj(f.get(self.neg[t] as usize, self.add_idx(s, t)))
            })
            .collect();
        Ok(FellSection { grid: self.grid.clone(), data })
    }

    /// `Φ(K)(x, y) = K(x+y, y)`.
    pub fn phi(&self, k: &Kernel<R::Elem>) -> Result<FellSection<R::Elem>> {
        self.check_grid(&k.grid)?;
        let g = self.grid.size();
        let data = (0..g * g).map(|x| k.get(self.add_idx(x / g, x % g), x % g).clone()).collect();
        Ok(FellSection { grid: self.grid.clone(), data })
    }

    /// `Φ⁻¹(f)(u, v) = f(u−v, v)`.
    pub fn phi_inv(&self, f: &FellSection<R::Elem>) -> Result<Kernel<R::Elem>> {
        self.check_grid(&f.grid)?;
        let g = self.grid.size();
        let data = (0..g * g).map(|x| f.get(self.sub_idx(x / g, x % g), x % g).clone()).collect();
        Ok(Kernel { grid: self.grid.clone(), data })
    }

    /// `K₃(x, y) = Σ_r χ(x∧r∧y) K₁(x, r) K₂(r, y)`, summed in increasing `r`.
    pub fn kernel_mult(&self, k1: &Kernel<R::Elem>, k2: &Kernel<R::Elem>) -> Result<Kernel<R::Elem>> {
        self.check_grid(&k1.grid)?;
        self.check_grid(&k2.grid)?;
        let size = self.grid.size();
        let (p1, p2) = (self.prepare(&k1.data), self.prepare(&k2.data));
        let data: Vec<R::Elem> = (0..size)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut row = self.ring.accumulator(size);
                let Some(xrow) = &p1[x] else {
                    return self.ring.finish(&row);
                };
                for (r, a) in xrow.iter().enumerate() {
                    let Some(rrow) = &p2[r] else {
                        continue;
                    };
                    if self.ring.prepared_is_zero(a) {
                        continue;
                    }
                    let form = self.form(x, r);
                    for (y, b) in rrow.iter().enumerate() {
                        if !self.ring.prepared_is_zero(b) {
                            let k = (self.eval_form(&form, y) as u64 % self.grid.period() as u64) as u32;
                            self.ring.accumulate(&mut row, y, a, b, k);
                        }
                    }
                }
                self.ring.finish(&row)
            })
            .collect();
        Ok(Kernel { grid: self.grid.clone(), data })
    }

    /// `K*(x, y) = conj K(y, x)`.
    pub fn kernel_adjoint(&self, k: &Kernel<R::Elem>) -> Result<Kernel<R::Elem>> {
        self.check_grid(&k.grid)?;
        let g = self.grid.size();
        let data = (0..g * g).map(|x| self.ring.conj(k.get(x % g, x / g))).collect();
        Ok(Kernel { grid: self.grid.clone(), data })
    }

    /// Both sides of `‖f‖² = Σ_s (f*•f)(0, s) = Σ_{r,s} |f(r, s)|²`.
    pub fn hs_norm_parts(&self, f: &FellSection<R::Elem>) -> Result<(R::Elem, R::Elem)> {
        let fs = self.involute(f)?;
        let zero = self.grid.index(&vec![0; self.grid.n()]);
        let row = self.convolve_row(&self.prepare(&fs.data), &self.prepare(&f.data), zero);
        let via_product = row.iter().fold(self.ring.zero(), |acc, x| self.ring.add(&acc, x));
        let mut direct = self.ring.zero();
        for x in &f.data {
            self.ring.mul_add_root(&mut direct, &self.ring.conj(x), x, 0);
        }
        Ok((via_product, direct))
    }

    pub fn hs_norm(&self, f: &FellSection<R::Elem>) -> Result<f64> {
        let (_, direct) = self.hs_norm_parts(f)?;
        Ok(self.ring.to_complex(&direct).re.max(0.0).sqrt())
    }

    fn single_fiber(&self, f: &FellSection<R::Elem>, name: &str) -> Result<usize> {
        let rows: Vec<usize> = self.prepare(&f.data).iter().enumerate().filter(|(_, r)| r.is_some()).map(|(i, _)| i).collect();
        match rows.as_slice() {
            [t] => Ok(*t),
            [] => Err(Error::VanishingProduct),
            _ => Err(Error::NotHomogeneous(format!("`{name}` is supported on {} fibers", rows.len()))),
        }
    }

    /// The constant `ρ` with `f•(g•h) = ζ^ρ · (f•g)•h`.
    pub fn associator_defect(
        &self,
        f: &FellSection<R::Elem>,
        g: &FellSection<R::Elem>,
        h: &FellSection<R::Elem>,
    ) -> Result<AssociatorDefect> {
        let t = self.single_fiber(f, "f")?;
        let u = self.single_fiber(g, "g")?;
        let v = self.single_fiber(h, "h")?;
        let left = self.convolve(f, &self.convolve(g, h)?)?;
        let right = self.convolve(&self.convolve(f, g)?, h)?;
        let n = self.grid.period();
        let size = self.grid.size();
        // both products live on the fiber t+u+v
        let w = self.add_idx(self.add_idx(t, u), v);
        let stray = |x: &FellSection<R::Elem>| {
            x.data.chunks(size).enumerate().any(|(row, c)| row != w && c.iter().any(|e| !self.ring.is_zero(e)))
        };
        if stray(&left) || stray(&right) {
            return Err(Error::NonConstantRatio("product leaves the fiber t+u+v".into()));
        }
        let (left, right) = (left.slice(w), right.slice(w));
        let pivot = (0..size)
            .max_by(|&a, &b| {
                let (x, y) = (self.ring.to_complex(&right[a]).norm(), self.ring.to_complex(&right[b]).norm());
                x.total_cmp(&y).then(b.cmp(&a))
            })
            .filter(|&p| !self.ring.is_zero(&right[p]))
            .ok_or(Error::VanishingProduct)?;
        let scale = 1.0 + self.ring.to_complex(&right[pivot]).norm();
        let candidates: Vec<u32> = (0..n)
            .filter(|&k| self.ring.residual(&left[pivot], &self.ring.mul_root(&right[pivot], k)) <= 1e-9 * scale)
            .collect();
        let mut best: Option<(u32, f64)> = None;
        for k in candidates {
            let r = left
                .iter()
                .zip(right)
                .map(|(a, b)| self.ring.residual(a, &self.ring.mul_root(b, k)))
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, br)| r < br) {
                best = Some((k, r));
            }
        }
        let (rho, residual) = best.ok_or_else(|| Error::NonConstantRatio("pivot ratio is not an N-th root of unity".into()))?;
        let tol = match self.ring.mode() {
            crate::cohomology::Mode::Exact => 0.0,
            crate::cohomology::Mode::Float => 1e-9,
        };
        if residual > tol {
            return Err(Error::NonConstantRatio(format!("entrywise ratio varies (residual {residual:e})")));
        }
        let chi = self.chi_exp(t, u, v);
        Ok(AssociatorDefect { period: n, rho, chi, residual })
    }
}

/// The phase relating the two parenthesizations, as exponents of `ζ = exp(2πi/N)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssociatorDefect {
    pub period: u32,
    /// `f•(g•h) = ζ^rho · (f•g)•h`.
    pub rho: u32,
    /// `χ(t∧u∧v) = ζ^chi`.
    pub chi: u32,
    /// Entrywise residual of the fitted ratio.
    pub residual: f64,
}

impl AssociatorDefect {
    pub fn chi_inv(&self) -> u32 {
        (self.period - self.chi) % self.period
    }

    /// `χ(t∧u∧v)^σ` for the frozen orientation.
    pub fn expected(&self) -> u32 {
        if ASSOCIATOR_ORIENTATION < 0 {
            self.chi_inv()
        } else {
            self.chi
        }
    }

    pub fn matches_orientation(&self) -> bool {
        self.rho == self.expected()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "period": self.period,
            "rho": self.rho,
            "chi": self.chi,
            "chi_inverse": self.chi_inv(),
            "orientation": ASSOCIATOR_ORIENTATION,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRing, FloatRing};
    use crate::sampling;

    fn bundle(m: i64, n: u32) -> FellBundle<ExactRing> {
        FellBundle::new(ExactRing::new(n), GridTricharacter::new(3, n, vec![m]).unwrap()).unwrap()
    }

    #[test]
    fn chi_exponent_matches_direct_wedge() {
        let b = bundle(1, 4);
        let mut rng = sampling::rng(4);
        for _ in 0..200 {
            let [x, y, z]: [usize; 3] = std::array::from_fn(|_| rng.gen_range(0..b.grid().size()));
            let pts = [b.grid().point(x), b.grid().point(y), b.grid().point(z)];
            assert_eq!(b.chi_exp(x, y, z), b.chi().exponent(&pts[0], &pts[1], &pts[2]));
        }
    }

    #[test]
    fn fiber_mult_on_deltas() {
        let b = bundle(1, 4);
        let ring = b.ring().clone();
        let g = b.grid().clone();
        let (t1, t2) = ([1, 0, 0], [0, 1, 0]);
        let d = [0i64, 0, 1];
        let bpt = [0i64, 1, 1]; // = d + t2
        let delta = |p: &[i64]| {
            let mut v = vec![ring.zero(); g.size()];
            v[g.index(p)] = ring.one();
            v
        };
        let out = b.fiber_mult(&t1, &t2, &delta(&bpt), &delta(&d)).unwrap();
        let mut expected = vec![ring.zero(); g.size()];
        expected[g.index(&d)] = ring.root(1);
        assert_eq!(out, expected);

        let zero = [0, 0, 0];
        let out = b.fiber_mult(&zero, &t2, &delta(&bpt), &delta(&d)).unwrap();
        expected[g.index(&d)] = ring.one();
        assert_eq!(out, expected);
    }

    #[test]
    fn convolve_deltas() {
        let b = bundle(1, 4);
        let (ring, g) = (b.ring().clone(), b.grid().clone());
        let (a, c, d) = ([1, 0, 0], [0, 1, 0], [0, 0, 1]);
        let bpt = [0, 1, 1];
        let f = FellSection::delta(&ring, &g, &a, &bpt);
        let h = FellSection::delta(&ring, &g, &c, &d);
        let out = b.convolve(&f, &h).unwrap();
        let mut expected = FellSection::zero(&ring, &g);
        expected.set(g.index(&[1, 1, 0]), g.index(&d), ring.root(1));
        assert_eq!(out, expected);

        let off = FellSection::delta(&ring, &g, &a, &[0, 0, 0]);
        assert_eq!(b.convolve(&off, &h).unwrap(), FellSection::zero(&ring, &g));
    }

    #[test]
    fn involution_of_delta() {
        let b = bundle(1, 4);
        let (ring, g) = (b.ring().clone(), b.grid().clone());
        let f = FellSection::delta(&ring, &g, &[1, 2, 0], &[0, 1, 3]);
        let star = b.involute(&f).unwrap();
        assert_eq!(star, FellSection::delta(&ring, &g, &[3, 2, 0], &[1, 3, 3]));
        assert_eq!(b.involute(&star).unwrap(), f);
    }

    #[test]
    fn phi_of_delta_kernel() {
        let b = bundle(1, 4);
        let (ring, g) = (b.ring().clone(), b.grid().clone());
        let mut k = Kernel::zero(&ring, &g);
        k.set(g.index(&[1, 2, 3]), g.index(&[0, 3, 1]), ring.one());
        let f = b.phi(&k).unwrap();
        assert_eq!(f, FellSection::delta(&ring, &g, &[1, 3, 2], &[0, 3, 1]));
        assert_eq!(b.phi_inv(&f).unwrap(), k);
    }

    #[test]
    fn generator_associator_orientation() {
        let b = bundle(1, 4);
        let (ring, g) = (b.ring().clone(), b.grid().clone());
        let f = FellSection::delta(&ring, &g, &[1, 0, 0], &[0, 1, 1]);
        let gg = FellSection::delta(&ring, &g, &[0, 1, 0], &[0, 0, 1]);
        let h = FellSection::delta(&ring, &g, &[0, 0, 1], &[0, 0, 0]);
        let d = b.associator_defect(&f, &gg, &h).unwrap();
        assert_eq!(d.chi, 1);
        assert_eq!(d.rho, 3);
        assert!(d.matches_orientation());
    }

    #[test]
    fn float_mode_agrees() {
        let ring = FloatRing::new(4, 1e-12);
        let b = FellBundle::new(ring.clone(), GridTricharacter::new(3, 4, vec![1]).unwrap()).unwrap();
        let mut rng = sampling::rng(9);
        let f = FellSection::random(&ring, b.grid(), &mut rng);
        let (p, d) = b.hs_norm_parts(&f).unwrap();
        assert!((p - d).norm() < 1e-9);
    }

    #[test]
    fn vanishing_product_is_reported() {
        let b = bundle(1, 4);
        let (ring, g) = (b.ring().clone(), b.grid().clone());
        let f = FellSection::delta(&ring, &g, &[1, 0, 0], &[0, 0, 0]);
        let h = FellSection::delta(&ring, &g, &[0, 1, 0], &[0, 0, 0]);
        assert!(matches!(b.associator_defect(&f, &h, &h), Err(Error::VanishingProduct)));
    }

    #[test]
    fn json_round_trip() {
        let b = bundle(1, 3);
        let mut rng = sampling::rng(1);
        let f = FellSection::random(b.ring(), b.grid(), &mut rng);
        assert_eq!(FellSection::from_json(b.ring(), &f.to_json(b.ring())).unwrap(), f);
    }
}
