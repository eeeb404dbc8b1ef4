use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use modunits::classgroup::{class_number_yu, ClassGroup};
use modunits::numtheory::is_prime;
use modunits::qexpansion::{expand_product, DEFAULT_TRUNCATION};
use modunits::siegel::orbit_condition_holds;
use modunits::Result;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub level: u64,
    pub scale: u64,
    /// Siegel index at `level` to exponent.
    pub exponents: BTreeMap<u64, i64>,
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub yu_vs_lattice: bool,
    /// Vacuously true at prime level, where the condition is not defined.
    pub orbit: bool,
    pub q_integrality: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.yu_vs_lattice && self.orbit && self.q_integrality
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub divisor: String,
    pub order: String,
}

/// Wall-clock data. Kept apart so cached and fresh output compare equal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub computed_at: u64,
    /// Basis, divisor matrix and normal forms.
    pub lattice_us: u64,
    pub formula_us: u64,
    pub checks_us: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: u64,
    pub class_number: String,
    pub invariants: Vec<String>,
    pub basis: Vec<BasisRecord>,
    pub checks: Checks,
    pub generators: Vec<GeneratorRecord>,
    /// Formula value when it disagrees with `class_number`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_number_formula: Option<String>,
    pub generator: Option<u64>,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

fn micros(t: Instant) -> u64 {
    t.elapsed().as_micros() as u64
}

impl ResultRecord {
    pub fn compute(n: u64, generator: Option<u64>) -> Result<Self> {
        let t = Instant::now();
        let group = ClassGroup::new(n, generator)?;
        let lattice_us = micros(t);
        let t = Instant::now();
        let h_yu = class_number_yu(n)?;
        let formula_us = micros(t);

        let t = Instant::now();
        let mut orbit = true;
        let mut q_integrality = true;
        for e in &group.basis {
            if !is_prime(n) {
                orbit &= orbit_condition_holds(&e.unit)?;
            }
            q_integrality &= expand_product(&e.unit, DEFAULT_TRUNCATION)?.has_integral_exponents();
        }
        let checks_us = micros(t);

        let basis = group
            .basis
            .iter()
            .map(|e| {
                let mut exponents = BTreeMap::new();
                for &(h, k) in &e.factors {
                    *exponents.entry(h).or_insert(0) += k;
                }
                exponents.retain(|_, k| *k != 0);
                BasisRecord { level: e.level, scale: e.scale, exponents, display: e.display() }
            })
            .collect();
        let agree = h_yu == group.order;
        Ok(ResultRecord {
            n,
            class_number: group.order.to_string(),
            invariants: group.structure.invariants.iter().map(ToString::to_string).collect(),
            basis,
            checks: Checks { yu_vs_lattice: agree, orbit, q_integrality },
            generators: group
                .generators
                .iter()
                .map(|g| GeneratorRecord { divisor: group.render_generator(g), order: g.order.to_string() })
                .collect(),
            class_number_formula: (!agree).then(|| h_yu.to_string()),
            generator,
            version: VERSION.to_string(),
            meta: Some(Meta {
                computed_at: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
                lattice_us,
                formula_us,
                checks_us,
            }),
        })
    }

    pub fn structure_string(&self) -> String {
        format!("[{}]", self.invariants.join(", "))
    }

    /// The record as printed: no wall-clock data unless asked for.
    pub fn for_output(&self, timings: bool) -> Self {
        let mut r = self.clone();
        if !timings {
            r.meta = None;
        }
        r
    }
}
