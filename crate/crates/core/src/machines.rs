//! Machines shipped with the crate, plus a seeded random machine generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tm::{parse_tm_spec, Move, TmConfiguration, TuringMachine};

pub const COLLATZ_SPEC: &str = include_str!("../machines/collatz.tm");
pub const BUSY_BEAVER_2_SPEC: &str = include_str!("../machines/busy_beaver_2.tm");
pub const BINARY_INCREMENT_SPEC: &str = include_str!("../machines/binary_increment.tm");
pub const HALT_NOW_SPEC: &str = include_str!("../machines/halt_now.tm");
pub const RANDOM_SEEDS: &str = include_str!("../machines/random_seeds.txt");

/// Every bundled spec, by file name.
pub const CORPUS: &[(&str, &str)] = &[
    ("collatz.tm", COLLATZ_SPEC),
    ("busy_beaver_2.tm", BUSY_BEAVER_2_SPEC),
    ("binary_increment.tm", BINARY_INCREMENT_SPEC),
    ("halt_now.tm", HALT_NOW_SPEC),
];

/// The Collatz machine started on 19 (`2 0 1` in base 3).
pub fn collatz() -> (TuringMachine, TmConfiguration) {
    parse_tm_spec(COLLATZ_SPEC).expect("bundled collatz spec parses")
}

/// Seeds listed in the corpus seed file.
pub fn corpus_seeds() -> Vec<u64> {
    RANDOM_SEEDS
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse().expect("seed file holds integers"))
        .collect()
}

/// Shape of machines drawn by [`random_machine`].
#[derive(Debug, Clone)]
pub struct RandomShape {
    pub symbols: std::ops::RangeInclusive<usize>,
    pub states: std::ops::RangeInclusive<usize>,
    /// Fraction of `(state, symbol)` pairs that get a rule.
    pub density: std::ops::RangeInclusive<f64>,
    pub tape_len: std::ops::RangeInclusive<usize>,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            symbols: 2..=8,
            states: 1..=6,
            density: 0.5..=1.0,
            tape_len: 1..=6,
        }
    }
}

/// A random machine and start configuration, fully determined by `seed`.
pub fn random_machine(seed: u64) -> (TuringMachine, TmConfiguration) {
    random_machine_with(seed, &RandomShape::default())
}

pub fn random_machine_with(seed: u64, shape: &RandomShape) -> (TuringMachine, TmConfiguration) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_symbols = rng.gen_range(shape.symbols.clone());
    let n_states = rng.gen_range(shape.states.clone());
    let density = rng.gen_range(shape.density.clone());

    let symbols: Vec<String> = std::iter::once("_".to_owned())
        .chain((1..n_symbols).map(|i| format!("s{i}")))
        .collect();
    let states: Vec<String> = (0..n_states).map(|i| format!("Q{i}")).collect();
    let mut machine =
        TuringMachine::new(symbols.clone(), states.clone(), &states[0]).expect("distinct tokens");

    let mut keys: Vec<(usize, usize)> = (0..n_states)
        .flat_map(|s| (0..n_symbols).map(move |r| (s, r)))
        .collect();
    keys.shuffle(&mut rng);
    let count = ((keys.len() as f64) * density).round() as usize;
    keys.truncate(count.clamp(1, keys.len()));
    keys.sort_unstable();
    for (s, r) in keys {
        let write = &symbols[rng.gen_range(0..n_symbols)];
        let shift = if rng.gen_bool(0.5) {
            Move::Left
        } else {
            Move::Right
        };
        let next = &states[rng.gen_range(0..n_states)];
        machine
            .add_rule(&states[s], &symbols[r], write, shift, next)
            .expect("generated rule is well formed");
    }

    let len = rng.gen_range(shape.tape_len.clone());
    let cells: Vec<String> = (0..len)
        .map(|_| symbols[rng.gen_range(0..n_symbols)].clone())
        .collect();
    let head = rng.gen_range(0..len);
    let config = machine
        .configuration(cells, head)
        .expect("head within tape");
    (machine, config)
}
