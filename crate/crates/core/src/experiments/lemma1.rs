use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::semantics::{check_lemma1_instance, Lemma1Report, TailSeq, UnitValue};

pub const LEMMA1_MAX_LEN: usize = 50;
pub const LEMMA1_MAX_DEN: i64 = 60;

fn grid_value(rng: &mut ChaCha8Rng) -> UnitValue {
    match rng.gen_range(0..8) {
        0 => UnitValue::zero(),
        1 => UnitValue::one(),
        _ => {
            let d = rng.gen_range(1..=LEMMA1_MAX_DEN);
            UnitValue::ratio(rng.gen_range(0..=d), d)
        }
    }
}

fn positive_value(rng: &mut ChaCha8Rng) -> UnitValue {
    let d = rng.gen_range(1..=LEMMA1_MAX_DEN);
    UnitValue::ratio(rng.gen_range(1..=d), d)
}

/// A grid value `c` with `gamma + c - 1 <= delta`, the per-index hypothesis.
fn admissible_chi(rng: &mut ChaCha8Rng, gamma: &UnitValue, delta: &UnitValue) -> UnitValue {
    let d = rng.gen_range(1..=LEMMA1_MAX_DEN);
    let bound = (UnitValue::one().into_rational() + delta.rational() - gamma.rational()).min(UnitValue::one().into_rational());
    let top = (bound * num_rational::BigRational::from_integer(d.into())).floor().to_integer();
    let top: i64 = num_traits::ToPrimitive::to_i64(&top).expect("bounded numerator");
    UnitValue::ratio(rng.gen_range(0..=top), d)
}

/// Which of the two tail sums that can diverge do: `1 - gamma` and `delta`.
/// Sample `i` uses case `i % 4`.
pub fn tail_case(i: usize) -> (bool, bool) {
    ((i & 1) == 1, (i & 2) == 2)
}

/// A triple satisfying the hypothesis at every index. `gamma_diverges`
/// makes the tail of `1 - gamma` positive; `delta_diverges` makes the tail
/// of `delta` positive.
pub fn sample_lemma1_triple(rng: &mut ChaCha8Rng, gamma_diverges: bool, delta_diverges: bool) -> (TailSeq, TailSeq, TailSeq) {
    let n = rng.gen_range(0..=LEMMA1_MAX_LEN);
    let mut g = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    for _ in 0..n {
        let (gi, di) = (grid_value(rng), grid_value(rng));
        c.push(admissible_chi(rng, &gi, &di));
        g.push(gi);
        d.push(di);
    }
    let g_tail = if gamma_diverges {
        positive_value(rng).complement()
    } else {
        UnitValue::one()
    };
    let d_tail = if delta_diverges {
        positive_value(rng)
    } else {
        UnitValue::zero()
    };
    let c_tail = if rng.gen_bool(0.5) {
        UnitValue::zero()
    } else {
        admissible_chi(rng, &g_tail, &d_tail)
    };
    (TailSeq::new(g, g_tail), TailSeq::new(c, c_tail), TailSeq::new(d, d_tail))
}

/// Sample `i` of the stream for `seed`.
pub fn lemma1_sample(seed: u64, i: usize) -> (TailSeq, TailSeq, TailSeq) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let (gd, dd) = tail_case(i);
    sample_lemma1_triple(&mut rng, gd, dd)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Lemma1Summary {
    pub samples: usize,
    pub seed: u64,
    pub hypothesis_failures: usize,
    pub conclusion_failures: usize,
    /// Samples per tail case `[both zero, 1-gamma positive, delta positive, both positive]`.
    pub tail_cases: [usize; 4],
    /// Samples whose three sums are all finite.
    pub convergent: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Lemma1Report>,
    pub runtime_ms: u64,
}

pub fn run_lemma1(samples: usize, seed: u64) -> Lemma1Summary {
    let started = Instant::now();
    let reports: Vec<Lemma1Report> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (g, c, d) = lemma1_sample(seed, i);
            check_lemma1_instance(&g, &c, &d)
        })
        .collect();
    let mut out = Lemma1Summary {
        samples,
        seed,
        hypothesis_failures: 0,
        conclusion_failures: 0,
        tail_cases: [0; 4],
        convergent: 0,
        first_failure: None,
        runtime_ms: 0,
    };
    for (i, r) in reports.into_iter().enumerate() {
        out.tail_cases[i % 4] += 1;
        let finite = [&r.sum_one_minus_gamma, &r.sum_chi, &r.sum_delta].iter().all(|s| *s != "inf");
        out.convergent += usize::from(finite);
        out.hypothesis_failures += usize::from(!r.hypothesis_holds);
        if !r.conclusion_holds {
            out.conclusion_failures += 1;
            out.first_failure.get_or_insert(r);
        }
    }
    out.runtime_ms = started.elapsed().as_millis() as u64;
    out
}
