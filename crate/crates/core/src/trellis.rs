//! The 8-state recursive systematic convolutional encoder (RSCE).
//!
//! Generator matrix `[1, g1(D)/g0(D)]` with `g0(D) = 1 + D^2 + D^3` (feedback)
//! and `g1(D) = 1 + D + D^3` (forward). The state index packs the three shift
//! register cells newest-first: `state = s1 << 2 | s2 << 1 | s3`, where `s1`
//! holds the most recent register input. With this packing the transition
//! table derived from the polynomials matches the classic LTE table:
//!
//! ```text
//! s'        0 1 2 3 4 5 6 7
//! s | u=0   0 4 5 1 2 6 7 3
//! s | u=1   4 0 1 5 6 2 3 7
//! ```

use crate::{Bit, Error, Result};

/// Number of encoder states.
pub const NUM_STATES: usize = 8;
/// Encoder memory, and the number of termination steps.
pub const MEMORY: usize = 3;
/// Number of trellis transitions per stage (`NUM_STATES * 2`).
pub const NUM_TRANSITIONS: usize = 16;

/// Feedback polynomial `g0(D) = 1 + D^2 + D^3`; bit `i` is the coefficient of `D^i`.
pub const FEEDBACK_TAPS: u8 = 0b1101;
/// Forward polynomial `g1(D) = 1 + D + D^3`; bit `i` is the coefficient of `D^i`.
pub const FORWARD_TAPS: u8 = 0b1011;

/// One edge `s' -> s` of the trellis.
///
/// Transitions are indexed `t = 2 * from + input`, so the edges leaving a state
/// are adjacent and ordered by input bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub from: u8,
    pub to: u8,
    pub input: Bit,
    pub parity: Bit,
}

impl Transition {
    /// Bipolar label of the input (and systematic) bit: `0 -> -1`, `1 -> +1`.
    #[inline]
    pub fn input_sign(&self) -> f64 {
        if self.input == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Bipolar label of the parity bit.
    #[inline]
    pub fn parity_sign(&self) -> f64 {
        if self.parity == 1 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Transition tables of the RSCE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrellisSpec {
    pub num_states: usize,
    pub feedback_taps: u8,
    pub forward_taps: u8,
    /// `next_state[s'][u]`.
    pub next_state: [[u8; 2]; NUM_STATES],
    /// `parity[s'][u]`.
    pub parity: [[Bit; 2]; NUM_STATES],
    /// `(s', s)` pairs driven by `u = 0`, ordered by `s'`.
    pub s0_pairs: Vec<(u8, u8)>,
    /// `(s', s)` pairs driven by `u = 1`, ordered by `s'`.
    pub s1_pairs: Vec<(u8, u8)>,
    transitions: [Transition; NUM_TRANSITIONS],
    /// For each state `s`, its two incoming transitions ordered by input bit.
    incoming: [[u8; 2]; NUM_STATES],
    /// For each state `s'`, the single termination transition leaving it.
    tail: [u8; NUM_STATES],
}

impl Default for TrellisSpec {
    fn default() -> Self {
        build_trellis()
    }
}

/// Builds the RSCE trellis from the generator polynomials.
pub fn build_trellis() -> TrellisSpec {
    let mut next_state = [[0u8; 2]; NUM_STATES];
    let mut parity = [[0u8; 2]; NUM_STATES];
    let mut transitions = [Transition {
        from: 0,
        to: 0,
        input: 0,
        parity: 0,
    }; NUM_TRANSITIONS];
    let mut s0_pairs = Vec::with_capacity(NUM_STATES);
    let mut s1_pairs = Vec::with_capacity(NUM_STATES);

    for from in 0..NUM_STATES {
        for input in 0..2u8 {
            let (to, p) = polynomial_step(FEEDBACK_TAPS, FORWARD_TAPS, from as u8, input);
            next_state[from][input as usize] = to;
            parity[from][input as usize] = p;
            transitions[2 * from + input as usize] = Transition {
                from: from as u8,
                to,
                input,
                parity: p,
            };
            if input == 0 {
                s0_pairs.push((from as u8, to));
            } else {
                s1_pairs.push((from as u8, to));
            }
        }
    }

    let mut incoming = [[u8::MAX; 2]; NUM_STATES];
    for (t, tr) in transitions.iter().enumerate() {
        incoming[tr.to as usize][tr.input as usize] = t as u8;
    }

    // Termination forces the register input to zero, so the input bit equals
    // the feedback and the register simply shifts.
    let mut tail = [0u8; NUM_STATES];
    for (from, slot) in tail.iter_mut().enumerate() {
        let fb = feedback_bit(FEEDBACK_TAPS, from as u8);
        *slot = (2 * from) as u8 + fb;
    }

    TrellisSpec {
        num_states: NUM_STATES,
        feedback_taps: FEEDBACK_TAPS,
        forward_taps: FORWARD_TAPS,
        next_state,
        parity,
        s0_pairs,
        s1_pairs,
        transitions,
        incoming,
        tail,
    }
}

/// Register cells `(s1, s2, s3)` of a packed state, newest first.
#[inline]
fn cells(state: u8) -> [u8; 3] {
    [(state >> 2) & 1, (state >> 1) & 1, state & 1]
}

/// XOR of the register cells selected by the `D^1..D^3` taps of `poly`.
fn tapped(poly: u8, state: u8) -> u8 {
    cells(state)
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| acc ^ (c & (poly >> (i + 1)) & 1))
}

fn feedback_bit(feedback: u8, state: u8) -> u8 {
    tapped(feedback, state)
}

/// Generic polynomial-division step used to derive the tables.
fn polynomial_step(feedback: u8, forward: u8, state: u8, input: Bit) -> (u8, Bit) {
    let reg_in = input ^ feedback_bit(feedback, state);
    let p = ((forward & 1) & reg_in) ^ tapped(forward, state);
    let next = (reg_in << 2) | (state >> 1);
    (next, p)
}

impl TrellisSpec {
    /// All 16 transitions, indexed `2 * from + input`.
    #[inline]
    pub fn transitions(&self) -> &[Transition; NUM_TRANSITIONS] {
        &self.transitions
    }

    #[inline]
    pub fn transition(&self, t: usize) -> &Transition {
        &self.transitions[t]
    }

    /// The two transitions entering `state`, ordered by input bit.
    #[inline]
    pub fn incoming(&self, state: usize) -> [u8; 2] {
        self.incoming[state]
    }

    /// The termination transition leaving `state`.
    #[inline]
    pub fn tail_transition(&self, state: usize) -> u8 {
        self.tail[state]
    }

    /// Advances the encoder by one information bit.
    ///
    /// Register input `a = u ^ s2 ^ s3`, parity `a ^ s1 ^ s3`.
    pub fn step(&self, state: usize, input: Bit) -> Result<(usize, Bit)> {
        if state >= NUM_STATES {
            return Err(Error::InvalidState(state));
        }
        if input > 1 {
            return Err(Error::InvalidBit(input));
        }
        let [s1, s2, s3] = cells(state as u8);
        let a = input ^ s2 ^ s3;
        let parity = a ^ s1 ^ s3;
        Ok((((a << 2) | (state as u8 >> 1)) as usize, parity))
    }

    /// Input bit that flushes the register from `state` (the feedback value).
    pub fn termination_input(&self, state: usize) -> Bit {
        let [_, s2, s3] = cells(state as u8);
        s2 ^ s3
    }
}

/// Output of one constituent encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsceOutput {
    pub systematic: Vec<Bit>,
    pub parity: Vec<Bit>,
    pub tail_systematic: [Bit; MEMORY],
    pub tail_parity: [Bit; MEMORY],
    pub final_state: usize,
}

/// Encodes `bits` from state 0 and terminates the trellis with three flush steps.
pub fn rsce_encode(spec: &TrellisSpec, bits: &[Bit]) -> Result<RsceOutput> {
    if bits.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut state = 0;
    let mut parity = Vec::with_capacity(bits.len());
    for &b in bits {
        let (next, p) = spec.step(state, b)?;
        parity.push(p);
        state = next;
    }
    let mut tail_systematic = [0; MEMORY];
    let mut tail_parity = [0; MEMORY];
    for i in 0..MEMORY {
        let u = spec.termination_input(state);
        let (next, p) = spec.step(state, u)?;
        tail_systematic[i] = u;
        tail_parity[i] = p;
        state = next;
    }
    Ok(RsceOutput {
        systematic: bits.to_vec(),
        parity,
        tail_systematic,
        tail_parity,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TABLE_U0: [u8; 8] = [0, 4, 5, 1, 2, 6, 7, 3];
    const TABLE_U1: [u8; 8] = [4, 0, 1, 5, 6, 2, 3, 7];

    #[test]
    fn next_state_matches_reference_table() {
        let spec = build_trellis();
        for s in 0..8 {
            assert_eq!(spec.next_state[s][0], TABLE_U0[s], "s'={s}, u=0");
            assert_eq!(spec.next_state[s][1], TABLE_U1[s], "s'={s}, u=1");
        }
        assert_eq!(spec.next_state[0][0], 0);
        assert_eq!(spec.next_state[1][0], 4);
        assert_eq!(spec.next_state[2][1], 1);
        assert_eq!(spec.next_state[7][1], 7);
    }

    #[test]
    fn step_agrees_with_polynomial_tables() {
        let spec = build_trellis();
        for s in 0..8 {
            for u in 0..2u8 {
                let (next, p) = spec.step(s, u).unwrap();
                assert_eq!(next as u8, spec.next_state[s][u as usize]);
                assert_eq!(p, spec.parity[s][u as usize]);
            }
        }
    }

    #[test]
    fn step_examples() {
        let spec = build_trellis();
        assert_eq!(spec.step(0, 0).unwrap(), (0, 0));
        assert_eq!(spec.step(0, 1).unwrap(), (4, 1));
        assert_eq!(spec.step(1, 0).unwrap(), (4, 0));
        assert!(matches!(spec.step(8, 0), Err(Error::InvalidState(8))));
        assert!(matches!(spec.step(0, 2), Err(Error::InvalidBit(2))));
    }

    #[test]
    fn transition_sets_partition_the_trellis() {
        let spec = build_trellis();
        assert_eq!(spec.s0_pairs.len() + spec.s1_pairs.len(), 16);
        for p in &spec.s0_pairs {
            assert!(!spec.s1_pairs.contains(p));
        }
        for b in 0..2 {
            let mut seen = [false; 8];
            for s in 0..8 {
                seen[spec.next_state[s][b] as usize] = true;
            }
            assert!(seen.iter().all(|&x| x), "u={b} is not a permutation");
        }
    }

    #[test]
    fn incoming_and_tail_transitions_are_consistent() {
        let spec = build_trellis();
        for s in 0..8 {
            for (b, &t) in spec.incoming(s).iter().enumerate() {
                let tr = spec.transition(t as usize);
                assert_eq!(tr.to as usize, s);
                assert_eq!(tr.input as usize, b);
            }
            let tr = spec.transition(spec.tail_transition(s) as usize);
            assert_eq!(tr.from as usize, s);
            assert_eq!(tr.to as usize, s >> 1);
        }
    }

    #[test]
    fn all_zero_block_encodes_to_zeros() {
        let spec = build_trellis();
        let out = rsce_encode(&spec, &[0; 40]).unwrap();
        assert!(out.parity.iter().all(|&p| p == 0));
        assert_eq!(out.tail_systematic, [0; 3]);
        assert_eq!(out.tail_parity, [0; 3]);
        assert_eq!(out.final_state, 0);
    }

    #[test]
    fn impulse_matches_step_rollout() {
        let spec = build_trellis();
        let mut bits = vec![0u8; 40];
        bits[0] = 1;
        let out = rsce_encode(&spec, &bits).unwrap();
        // Rollout of the transition table alone.
        let mut state = 0usize;
        let mut expected = Vec::new();
        for &b in &bits {
            expected.push(spec.parity[state][b as usize]);
            state = spec.next_state[state][b as usize] as usize;
        }
        assert_eq!(out.parity, expected);
        // Impulse response of g1/g0 by long division over GF(2).
        assert_eq!(&out.parity[..10], &[1, 1, 1, 1, 0, 0, 1, 0, 1, 1]);
        assert_eq!(out.final_state, 0);
    }

    #[test]
    fn empty_block_is_rejected() {
        assert!(matches!(
            rsce_encode(&build_trellis(), &[]),
            Err(Error::EmptyInput)
        ));
    }

    proptest! {
        #[test]
        fn encoder_terminates_and_is_systematic(bits in prop::collection::vec(0u8..2, 1..80)) {
            let spec = build_trellis();
            let out = rsce_encode(&spec, &bits).unwrap();
            prop_assert_eq!(out.final_state, 0);
            prop_assert_eq!(&out.systematic, &bits);
            prop_assert_eq!(out.parity.len(), bits.len());
        }
    }
}
