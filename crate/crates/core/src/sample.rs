//! Seeded, boundary-first value streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quantale::{Ddf, Kind, Quantale, Value};

/// Deterministic stream of quantale values: boundary elements first (0, top,
/// a few approximation witnesses, instance-specific landmarks), then
/// pseudo-random interior values.
pub struct Sampler<'q> {
    q: &'q Quantale,
    rng: ChaCha8Rng,
    boundary: Vec<Value>,
    cursor: usize,
}

impl<'q> Sampler<'q> {
    pub fn new(q: &'q Quantale, seed: u64) -> Self {
        Sampler {
            q,
            rng: ChaCha8Rng::seed_from_u64(seed),
            boundary: boundary_values(q),
            cursor: 0,
        }
    }

    pub fn boundary(&self) -> &[Value] {
        &self.boundary
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random value, with a fixed chance of a boundary element.
    pub fn mixed(&mut self) -> Value {
        if self.rng.gen_bool(0.15) {
            let i = self.rng.gen_range(0..self.boundary.len());
            self.boundary[i].clone()
        } else {
            self.random()
        }
    }

    /// An interior value drawn from the instance-specific distribution.
    pub fn random(&mut self) -> Value {
        random_value(self.q, &mut self.rng)
    }
}

impl Iterator for Sampler<'_> {
    type Item = Value;

    fn next(&mut self) -> Option<Value> {
        if self.cursor < self.boundary.len() {
            self.cursor += 1;
            Some(self.boundary[self.cursor - 1].clone())
        } else {
            Some(self.random())
        }
    }
}

fn boundary_values(q: &Quantale) -> Vec<Value> {
    let mut out = vec![q.zero(), q.top()];
    out.extend((0..4).map(|n| q.safa(n)));
    match q.kind() {
        Kind::ExtReal => out.extend([Value::ExtReal(1.0), Value::ExtReal(2.5)]),
        Kind::Unit => out.push(Value::Unit(0.5)),
        Kind::Errors => out.extend([Value::Errors(0.25), Value::Errors(0.75)]),
        Kind::Ddf => {
            out.push(Value::Ddf(Ddf::step(1.0, 0.5).expect("valid step")));
            out.push(Value::Ddf(Ddf::step(0.0, 0.5).expect("valid step")));
        }
        Kind::Truth | Kind::Lattice(_) => {}
    }
    let mut uniq: Vec<Value> = Vec::with_capacity(out.len());
    for v in out {
        if !uniq.contains(&v) {
            uniq.push(v);
        }
    }
    uniq
}

pub fn random_value<R: Rng>(q: &Quantale, rng: &mut R) -> Value {
    match q.kind() {
        Kind::Truth => Value::Truth(rng.gen()),
        Kind::ExtReal => Value::ExtReal(if rng.gen_ratio(1, 50) {
            f64::INFINITY
        } else {
            match rng.gen_range(0..10) {
                0..=4 => rng.gen_range(0.0..10.0),
                5..=7 => rng.gen_range(0..=80) as f64 / 8.0,
                8 => rng.gen_range(0.0..1e-3),
                _ => rng.gen_range(0.0..1e3),
            }
        }),
        Kind::Unit => Value::Unit(unit_sample(rng)),
        Kind::Errors => Value::Errors(unit_sample(rng)),
        Kind::Ddf => Value::Ddf(random_ddf(rng)),
        Kind::Lattice(l) => Value::Lattice(rng.gen_range(0..l.len())),
    }
}

fn unit_sample<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0..=5 => rng.gen_range(0.0..=1.0),
        6..=8 => rng.gen_range(0..=16) as f64 / 16.0,
        _ => {
            if rng.gen() {
                0.0
            } else {
                1.0
            }
        }
    }
}

/// A step function with up to three steps on a dyadic grid (breakpoints in
/// eighths up to 4, values in 32nds), so every derived operation is exact in
/// floating point.
pub fn random_ddf<R: Rng>(rng: &mut R) -> Ddf {
    let k = rng.gen_range(0..=3usize);
    let mut ts: Vec<u32> = Vec::new();
    while ts.len() < k {
        let t = rng.gen_range(0..=32);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    let mut vs: Vec<u32> = Vec::new();
    while vs.len() < k {
        let v = rng.gen_range(1..=32);
        if !vs.contains(&v) {
            vs.push(v);
        }
    }
    ts.sort_unstable();
    vs.sort_unstable();
    let steps = ts.iter().zip(&vs).map(|(&t, &v)| (t as f64 / 8.0, v as f64 / 32.0)).collect();
    Ddf::new(steps).expect("dyadic steps are canonical after normalization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_comes_first() {
        let q = Quantale::ext_real();
        let first: Vec<Value> = Sampler::new(&q, 7).take(2).collect();
        assert_eq!(first, vec![q.zero(), q.top()]);
    }

    #[test]
    fn same_seed_same_stream() {
        let q = Quantale::ddf();
        let a: Vec<Value> = Sampler::new(&q, 11).take(200).collect();
        let b: Vec<Value> = Sampler::new(&q, 11).take(200).collect();
        assert_eq!(a, b);
        let c: Vec<Value> = Sampler::new(&q, 12).take(200).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn samples_lie_in_the_carrier() {
        for q in [Quantale::truth(), Quantale::ext_real(), Quantale::unit(), Quantale::errors(), Quantale::ddf()] {
            for v in Sampler::new(&q, 3).take(500) {
                q.check(&v).unwrap();
            }
        }
    }

    #[test]
    fn ext_real_stream_contains_infinity() {
        let q = Quantale::ext_real();
        assert!(Sampler::new(&q, 0).take(10).any(|v| v == Value::ExtReal(f64::INFINITY)));
    }
}
