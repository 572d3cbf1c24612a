//! Brute-force complex-number oracles for the discrete Fell bundle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crossmod::fellbundle::ASSOCIATOR_ORIENTATION;
use crossmod::ring::CoefficientRing;
use crossmod::{sampling, ExactRing, FellBundle, FellSection, FloatRing, Grid, GridTricharacter, Kernel};

/// `⟨m, a∧b∧c⟩` from 3×3 determinants over lexicographic triples.
fn pairing(n: usize, m: &[i64], a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    let mut out = 0;
    let mut r = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let det = a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
                    + a[k] * (b[i] * c[j] - b[j] * c[i]);
                out += m[r] * det;
                r += 1;
            }
        }
    }
    out
}

struct Oracle {
    n: usize,
    period: i64,
    m: Vec<i64>,
    points: Vec<Vec<i64>>,
}

impl Oracle {
    fn new(n: usize, period: u32, m: &[i64]) -> Self {
        let grid = Grid::new(n, period).unwrap();
        Self { n, period: period as i64, m: m.to_vec(), points: (0..grid.size()).map(|i| grid.point(i)).collect() }
    }

    fn chi(&self, a: usize, b: usize, c: usize) -> Complex64 {
        let e = pairing(self.n, &self.m, &self.points[a], &self.points[b], &self.points[c]);
        Complex64::from_polar(1.0, 2.0 * PI * e as f64 / self.period as f64)
    }

    fn index(&self, p: &[i64]) -> usize {
        p.iter().fold(0, |acc, &x| acc * self.period as usize + x.rem_euclid(self.period) as usize)
    }

    fn combine(&self, a: usize, b: usize, sign: i64) -> usize {
        let p: Vec<i64> = self.points[a].iter().zip(&self.points[b]).map(|(x, y)| x + sign * y).collect();
        self.index(&p)
    }

    fn convolve(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let size = self.points.len();
        let mut out = vec![Complex64::new(0.0, 0.0); size * size];
        for t in 0..size {
            for s in 0..size {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..size {
                    let fs = self.combine(self.combine(s, t, 1), r, -1);
                    let gt = self.combine(t, r, -1);
                    acc += self.chi(r, t, s) * f[r * size + fs] * g[gt * size + s];
                }
                out[t * size + s] = acc;
            }
        }
        out
    }

    fn kernel_mult(&self, k1: &[Complex64], k2: &[Complex64]) -> Vec<Complex64> {
        let size = self.points.len();
        let mut out = vec![Complex64::new(0.0, 0.0); size * size];
        for x in 0..size {
            for y in 0..size {
                out[x * size + y] = (0..size).map(|r| self.chi(x, r, y) * k1[x * size + r] * k2[r * size + y]).sum();
            }
        }
        out
    }
}

fn complex<R: CoefficientRing>(ring: &R, data: &[R::Elem]) -> Vec<Complex64> {
    data.iter().map(|x| ring.to_complex(x)).collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn convolution_matches_brute_force() {
    for (n, period, m) in [(3, 3, vec![1]), (3, 4, vec![-2]), (2, 5, vec![]), (4, 2, vec![1, 0, 1, 1])] {
        let ring = ExactRing::new(period);
        let b = FellBundle::new(ring.clone(), GridTricharacter::new(n, period, m.clone()).unwrap()).unwrap();
        let oracle = Oracle::new(n, period, &m);
        let mut rng = sampling::rng(11);
        for _ in 0..3 {
            let f = FellSection::random(&ring, b.grid(), &mut rng);
            let g = FellSection::random(&ring, b.grid(), &mut rng);
            let got = complex(&ring, b.convolve(&f, &g).unwrap().data());
            let want = oracle.convolve(&complex(&ring, f.data()), &complex(&ring, g.data()));
            assert!(max_diff(&got, &want) < 1e-9, "n={n} N={period}");
        }
    }
}

#[test]
fn kernel_product_matches_brute_force() {
    for (n, period, m) in [(3, 3, vec![2]), (3, 4, vec![1])] {
        let ring = FloatRing::new(period, 1e-12);
        let b = FellBundle::new(ring.clone(), GridTricharacter::new(n, period, m.clone()).unwrap()).unwrap();
        let oracle = Oracle::new(n, period, &m);
        let mut rng = sampling::rng(12);
        let k1 = Kernel::random(&ring, b.grid(), &mut rng);
        let k2 = Kernel::random(&ring, b.grid(), &mut rng);
        let got = b.kernel_mult(&k1, &k2).unwrap();
        let want = oracle.kernel_mult(k1.data(), k2.data());
        assert!(max_diff(got.data(), &want) < 1e-9);
    }
}

#[test]
fn involution_and_phi_match_definitions() {
    let (n, period) = (2, 5);
    let ring = ExactRing::new(period);
    let b = FellBundle::new(ring.clone(), GridTricharacter::trivial(n, period)).unwrap();
    let oracle = Oracle::new(n, period, &[]);
    let size = oracle.points.len();
    let mut rng = sampling::rng(13);
    let f = FellSection::random(&ring, b.grid(), &mut rng);
    let star = b.involute(&f).unwrap();
    let k = b.phi_inv(&f).unwrap();
    for t in 0..size {
        for s in 0..size {
            let neg_t = oracle.index(&oracle.points[t].iter().map(|x| -x).collect::<Vec<_>>());
            assert_eq!(*star.get(t, s), ring.conj(f.get(neg_t, oracle.combine(s, t, 1))));
            // Φ⁻¹(f)(u, v) = f(u − v, v)
            assert_eq!(k.get(t, s), f.get(oracle.combine(t, s, -1), s));
        }
    }
}

/// `(δ_{t,a} • δ_{u,b}) • δ_{v,c}` against `δ_{t,a} • (δ_{u,b} • δ_{v,c})` on
/// delta triples, with the ratio read off directly.
const FROZEN_SIGMA: i64 = -1;

#[test]
fn delta_triples_fix_the_orientation() {
    assert_eq!(ASSOCIATOR_ORIENTATION as i64, FROZEN_SIGMA);
    let (n, period, m) = (3, 4, vec![1]);
    let ring = ExactRing::new(period);
    let b = FellBundle::new(ring.clone(), GridTricharacter::new(n, period, m.clone()).unwrap()).unwrap();
    let oracle = Oracle::new(n, period, &m);
    let grid = b.grid().clone();
    let zeta = Complex64::from_polar(1.0, 2.0 * PI / period as f64);
    let mut rng = sampling::rng(14);
    let mut nontrivial = 0;
    for _ in 0..40 {
        let (t, u, v, c2) = (
            &sampling::int_vector(&mut rng, n, 3),
            &sampling::int_vector(&mut rng, n, 3),
            &sampling::int_vector(&mut rng, n, 3),
            &sampling::int_vector(&mut rng, n, 3),
        );
        // base points chosen so that every product is nonzero
        let c1 = &c2.iter().zip(v).map(|(x, y)| x + y).collect::<Vec<_>>();
        let a = &c1.iter().zip(u).map(|(x, y)| x + y).collect::<Vec<_>>();
        let f = FellSection::delta(&ring, &grid, t, a);
        let g = FellSection::delta(&ring, &grid, u, c1);
        let h = FellSection::delta(&ring, &grid, v, c2);
        let (fo, go, ho) = (complex(&ring, f.data()), complex(&ring, g.data()), complex(&ring, h.data()));
        let left = oracle.convolve(&fo, &oracle.convolve(&go, &ho));
        let right = oracle.convolve(&oracle.convolve(&fo, &go), &ho);
        let p = (0..right.len()).find(|&i| right[i].norm() > 0.5).expect("nonzero product");
        let ratio = left[p] / right[p];
        let e = pairing(n, &m, t, u, v).rem_euclid(period as i64);
        let want = zeta.powi((FROZEN_SIGMA * e).rem_euclid(period as i64) as i32);
        assert!((ratio - want).norm() < 1e-9, "t={t:?} u={u:?} v={v:?}");
        assert!(left.iter().zip(&right).all(|(x, y)| (x - want * y).norm() < 1e-9));
        if e != 0 {
            nontrivial += 1;
        }
        let d = b.associator_defect(&f, &g, &h).unwrap();
        assert_eq!(d.rho as i64, (FROZEN_SIGMA * e).rem_euclid(period as i64));
        assert!(d.matches_orientation());
    }
    assert!(nontrivial > 10);
}
