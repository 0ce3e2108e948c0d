//! Fixed-width transition tables for machine indices past the native slots.
//!
//! An encoding is `1^{q-1} 0` followed by `3q` transition records, one per
//! (state, read symbol) with symbols ordered `0, 1, blank`. Each record is
//!
//! ```text
//! next state : w bits, w = ceil(log2(q + 1)); value q means halt
//! write      : 2 bits, 00 = '0', 01 = '1', 10 = blank (11 is malformed)
//! move       : 1 bit,  0 = left, 1 = right
//! ```
//!
//! The string must have exactly this length. Anything else is malformed and
//! decodes to the everywhere-diverging behavior.

use crate::bitstr::BitString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    /// `None` halts.
    pub next: Option<u32>,
    pub write: Symbol,
    pub movement: Move,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmTable {
    states: u32,
    /// Indexed by `3 * state + symbol`.
    transitions: Vec<Transition>,
}

/// Result of a bounded simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TmRun {
    Halted { output: BitString, steps: u64 },
    OutOfSteps,
}

fn field_width(states: u32) -> usize {
    (u64::from(states) + 1).next_power_of_two().trailing_zeros() as usize
}

fn symbol_slot(s: Symbol) -> usize {
    match s {
        Symbol::Zero => 0,
        Symbol::One => 1,
        Symbol::Blank => 2,
    }
}

impl TmTable {
    /// Builds a table from `3 * states` transitions. Panics on a length or
    /// state-range mismatch.
    pub fn new(states: u32, transitions: Vec<Transition>) -> Self {
        assert!(states >= 1, "a table needs at least one state");
        assert_eq!(transitions.len(), 3 * states as usize);
        assert!(transitions
            .iter()
            .all(|t| t.next.map_or(true, |n| n < states)));
        TmTable {
            states,
            transitions,
        }
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn transition(&self, state: u32, read: Symbol) -> Transition {
        self.transitions[3 * state as usize + symbol_slot(read)]
    }

    /// Parses an encoding; `None` when malformed.
    pub fn parse(code: &BitString) -> Option<TmTable> {
        let ones = code.leading_ones();
        if ones == code.len() || ones >= u32::MAX as usize {
            return None;
        }
        let states = ones as u32 + 1;
        let w = field_width(states);
        let body = &code.bits()[ones + 1..];
        if body.len() != 3 * states as usize * (w + 3) {
            return None;
        }
        let read = |bits: &[bool]| bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        let mut transitions = Vec::with_capacity(3 * states as usize);
        for rec in body.chunks(w + 3) {
            let next = read(&rec[..w]);
            let next = match next.cmp(&u64::from(states)) {
                std::cmp::Ordering::Less => Some(next as u32),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => return None,
            };
            let write = match (rec[w], rec[w + 1]) {
                (false, false) => Symbol::Zero,
                (false, true) => Symbol::One,
                (true, false) => Symbol::Blank,
                (true, true) => return None,
            };
            let movement = if rec[w + 2] { Move::Right } else { Move::Left };
            transitions.push(Transition {
                next,
                write,
                movement,
            });
        }
        Some(TmTable {
            states,
            transitions,
        })
    }

    pub fn encode(&self) -> BitString {
        let w = field_width(self.states);
        let mut out = BitString::ones(self.states as usize - 1);
        out.push(false);
        for t in &self.transitions {
            let next = t.next.map_or(u64::from(self.states), u64::from);
            out.extend_from(&BitString::from_uint(next, w));
            let (a, b) = match t.write {
                Symbol::Zero => (false, false),
                Symbol::One => (false, true),
                Symbol::Blank => (true, false),
            };
            out.push(a);
            out.push(b);
            out.push(t.movement == Move::Right);
        }
        out
    }

    /// Simulates on `input` placed at cells `0..`, head on cell 0, state 0.
    /// Every transition, including the halting one, costs one step. The
    /// output is read from the head rightwards up to the first blank.
    pub fn simulate(&self, input: &BitString, budget: u64) -> TmRun {
        let mut cells: Vec<Symbol> = input
            .iter()
            .map(|b| if b { Symbol::One } else { Symbol::Zero })
            .collect();
        let mut head: usize = 0;
        let mut state: u32 = 0;
        let mut steps: u64 = 0;
        loop {
            if steps == budget {
                return TmRun::OutOfSteps;
            }
            if head == cells.len() {
                cells.push(Symbol::Blank);
            }
            let t = self.transition(state, cells[head]);
            cells[head] = t.write;
            steps += 1;
            match t.movement {
                Move::Right => head += 1,
                Move::Left => {
                    if head == 0 {
                        cells.insert(0, Symbol::Blank);
                    } else {
                        head -= 1;
                    }
                }
            }
            match t.next {
                Some(n) => state = n,
                None => {
                    let output = cells[head..]
                        .iter()
                        .take_while(|&&s| s != Symbol::Blank)
                        .map(|&s| s == Symbol::One)
                        .collect();
                    return TmRun::Halted { output, steps };
                }
            }
        }
    }
}
