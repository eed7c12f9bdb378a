use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::ValueError;

/// Default precision budget, in bits, beyond what the operands' own size requires.
pub const DEFAULT_EXTRA_PRECISION: u64 = 4096;

/// A positive real known through ever tighter dyadic enclosures.
///
/// `floor_scaled(bits)` must return an integer `f` with
/// `f <= x * 2^bits <= f + 1`. Implementations are shared between threads.
pub trait IntervalOracle: Send + Sync + fmt::Debug {
    /// Stable name; two oracles with the same label are treated as the same real.
    fn label(&self) -> String;

    fn floor_scaled(&self, bits: u64) -> BigInt;
}

/// One generator of a [`RealBasis`].
#[derive(Clone, Debug)]
pub enum Generator {
    /// The constant 1.
    One,
    /// The positive square root of an integer.
    Sqrt(u64),
    Oracle(Arc<dyn IntervalOracle>),
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Generator::One, Generator::One) => true,
            (Generator::Sqrt(a), Generator::Sqrt(b)) => a == b,
            (Generator::Oracle(a), Generator::Oracle(b)) => a.label() == b.label(),
            _ => false,
        }
    }
}

impl Eq for Generator {}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::One => f.write_str("1"),
            Generator::Sqrt(n) => write!(f, "√{n}"),
            Generator::Oracle(o) => f.write_str(&o.label()),
        }
    }
}

/// Scenario-file form of a generator: `"one"` or `{"sqrt": 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Named(String),
    Sqrt { sqrt: u64 },
}

impl GeneratorSpec {
    pub fn to_generator(&self) -> Result<Generator, ValueError> {
        match self {
            GeneratorSpec::Named(name) if name == "one" => Ok(Generator::One),
            GeneratorSpec::Named(name) => Err(ValueError::InvalidGenerator(name.clone())),
            GeneratorSpec::Sqrt { sqrt } => Ok(Generator::Sqrt(*sqrt)),
        }
    }
}

impl From<&Generator> for GeneratorSpec {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::One => GeneratorSpec::Named("one".into()),
            Generator::Sqrt(n) => GeneratorSpec::Sqrt { sqrt: *n },
            Generator::Oracle(o) => GeneratorSpec::Named(o.label()),
        }
    }
}

#[derive(Debug)]
struct Slot {
    generator: Generator,
    /// Set when the generator is an integer.
    exact: Option<BigInt>,
    /// Highest-precision `floor(x * 2^bits)` computed so far.
    cache: Mutex<Option<(u64, BigInt)>>,
}

/// An ordered list of positive reals, assumed linearly independent over ℚ.
///
/// Independence is the caller's contract and is never verified; a dependent
/// basis shows up as [`ValueError::IndeterminateComparison`].
#[derive(Debug)]
pub struct RealBasis {
    slots: Vec<Slot>,
    extra_precision: u64,
}

impl PartialEq for RealBasis {
    fn eq(&self, other: &Self) -> bool {
        self.slots.len() == other.slots.len()
            && self
                .slots
                .iter()
                .zip(&other.slots)
                .all(|(a, b)| a.generator == b.generator)
    }
}

impl Eq for RealBasis {}

fn first_primes(k: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(k);
    let mut n = 2u64;
    while primes.len() < k {
        if primes
            .iter()
            .take_while(|&&p| p * p <= n)
            .all(|&p| n % p != 0)
        {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

impl RealBasis {
    pub fn new(generators: Vec<Generator>) -> Result<Arc<Self>, ValueError> {
        Self::with_extra_precision(generators, DEFAULT_EXTRA_PRECISION)
    }

    pub fn with_extra_precision(
        generators: Vec<Generator>,
        extra_precision: u64,
    ) -> Result<Arc<Self>, ValueError> {
        if generators.is_empty() {
            return Err(ValueError::EmptyBasis);
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(ValueError::DuplicateGenerator(i));
            }
            if matches!(g, Generator::Sqrt(0)) {
                return Err(ValueError::InvalidGenerator("sqrt of 0".into()));
            }
        }
        let slots = generators
            .into_iter()
            .map(|generator| {
                let exact = match &generator {
                    Generator::One => Some(BigInt::one()),
                    Generator::Sqrt(n) => {
                        let r = BigUint::from(*n).sqrt();
                        (&r * &r == BigUint::from(*n)).then(|| BigInt::from(r))
                    }
                    Generator::Oracle(_) => None,
                };
                Slot {
                    generator,
                    exact,
                    cache: Mutex::new(None),
                }
            })
            .collect();
        Ok(Arc::new(RealBasis {
            slots,
            extra_precision,
        }))
    }

    /// `{1, √2, √3, √5, …}` with `k` square roots of consecutive primes.
    pub fn sqrt_primes(k: usize) -> Arc<Self> {
        let mut gens = vec![Generator::One];
        gens.extend(first_primes(k).into_iter().map(Generator::Sqrt));
        Self::new(gens).expect("distinct primes")
    }

    /// The basis `{1}`: values are plain rationals.
    pub fn rational() -> Arc<Self> {
        Self::new(vec![Generator::One]).expect("single generator")
    }

    pub fn from_specs(specs: &[GeneratorSpec]) -> Result<Arc<Self>, ValueError> {
        let gens = specs
            .iter()
            .map(GeneratorSpec::to_generator)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(gens)
    }

    pub fn specs(&self) -> Vec<GeneratorSpec> {
        self.slots.iter().map(|s| (&s.generator).into()).collect()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn generator(&self, i: usize) -> Option<&Generator> {
        self.slots.get(i).map(|s| &s.generator)
    }

    pub fn extra_precision(&self) -> u64 {
        self.extra_precision
    }

    /// Index of an integer-valued generator (normally `One`), if any.
    pub fn unit_index(&self) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| matches!(s.generator, Generator::One))
    }

    pub(crate) fn exact_value(&self, i: usize) -> Option<&BigInt> {
        self.slots[i].exact.as_ref()
    }

    /// `floor(g_i * 2^bits)`; exact when the generator is an integer.
    pub(crate) fn floor_scaled(&self, i: usize, bits: u64) -> BigInt {
        let slot = &self.slots[i];
        if let Some(v) = &slot.exact {
            return v << bits;
        }
        let mut cache = slot.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((have, val)) = cache.as_ref() {
            if *have >= bits {
                return val >> (*have - bits);
            }
        }
        // Overshoot so that slowly growing requests do not recompute every time.
        let target = match cache.as_ref() {
            Some((have, _)) => bits.max(have * 2),
            None => bits.max(256),
        };
        let val = match &slot.generator {
            Generator::Sqrt(n) => BigInt::from((BigUint::from(*n) << (2 * target)).sqrt()),
            Generator::Oracle(o) => o.floor_scaled(target),
            Generator::One => unreachable!("exact generator"),
        };
        let out = &val >> (target - bits);
        *cache = Some((target, val));
        out
    }
}

impl fmt::Display for RealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", s.generator)?;
        }
        f.write_str("}")
    }
}
