//! Parallel concatenated turbo encoder, QPP interleaver and puncturing.
//!
//! Flattened codeword order (see `docs/FORMATS.md`):
//!
//! * unpunctured: `x_k, z_k, z'_k` for `k = 0..K`, then 12 tail bits;
//! * punctured: `x_k, z_k` for even `k` and `x_k, z'_k` for odd `k`, then 12 tail bits.
//!
//! The tail is `x_K z_K x_K+1 z_K+1 x_K+2 z_K+2` of the first encoder followed
//! by the same six bits of the second encoder.

use serde::{Deserialize, Serialize};

use crate::channel::LlrFrame;
use crate::trellis::{rsce_encode, TrellisSpec, MEMORY};
use crate::{Bit, Error, Result};

/// Number of tail bits in a codeword (two encoders, three steps, two bits each).
pub const TAIL_BITS: usize = 4 * MEMORY;

/// Serializable description of a turbo code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub k: usize,
    pub f1: usize,
    pub f2: usize,
    pub punctured: bool,
}

impl CodeSpec {
    /// The K=40 LTE code (`f1 = 3`, `f2 = 10`).
    pub const fn lte40(punctured: bool) -> Self {
        CodeSpec {
            k: 40,
            f1: 3,
            f2: 10,
            punctured,
        }
    }

    /// Codeword length `3K + 12`, or `2K + 12` when punctured.
    pub fn codeword_len(&self) -> usize {
        if self.punctured {
            2 * self.k + TAIL_BITS
        } else {
            3 * self.k + TAIL_BITS
        }
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.codeword_len() as f64
    }
}

impl Default for CodeSpec {
    fn default() -> Self {
        Self::lte40(false)
    }
}

/// Default QPP coefficients for the block lengths this crate ships.
pub fn default_qpp(k: usize) -> Result<(usize, usize)> {
    match k {
        40 => Ok((3, 10)),
        _ => Err(Error::NoDefaultInterleaver(k)),
    }
}

/// Quadratic permutation polynomial interleaver `pi(i) = (f1 i + f2 i^2) mod K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QppInterleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl QppInterleaver {
    pub fn new(k: usize, f1: usize, f2: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyInput);
        }
        let kk = k as u128;
        let perm: Vec<usize> = (0..k as u128)
            .map(|i| ((f1 as u128 * i + f2 as u128 * i * i) % kk) as usize)
            .collect();
        let mut inverse = vec![usize::MAX; k];
        for (i, &p) in perm.iter().enumerate() {
            if inverse[p] != usize::MAX {
                return Err(Error::InvalidInterleaver { k, f1, f2 });
            }
            inverse[p] = i;
        }
        Ok(QppInterleaver { perm, inverse })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `pi(i)`.
    pub fn index(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse_permutation(&self) -> &[usize] {
        &self.inverse
    }

    /// `out[i] = seq[pi(i)]`.
    pub fn interleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.check_len(seq.len())?;
        Ok(self.perm.iter().map(|&p| seq[p]).collect())
    }

    /// Inverse of [`interleave`](Self::interleave): `out[pi(i)] = seq[i]`.
    pub fn deinterleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.check_len(seq.len())?;
        Ok(self.inverse.iter().map(|&i| seq[i]).collect())
    }

    /// Allocation-free interleave for hot loops; lengths must already match.
    #[inline]
    pub(crate) fn interleave_into(&self, seq: &[f64], out: &mut [f64]) {
        for (o, &p) in out.iter_mut().zip(&self.perm) {
            *o = seq[p];
        }
    }

    #[inline]
    pub(crate) fn deinterleave_into(&self, seq: &[f64], out: &mut [f64]) {
        for (o, &i) in out.iter_mut().zip(&self.inverse) {
            *o = seq[i];
        }
    }

    fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.perm.len() {
            return Err(Error::LengthMismatch {
                expected: self.perm.len(),
                actual,
            });
        }
        Ok(())
    }
}

/// A validated turbo code: block length, interleaver and puncturing mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurboCodeConfig {
    spec: CodeSpec,
    interleaver: QppInterleaver,
    trellis: TrellisSpec,
}

impl TurboCodeConfig {
    pub fn new(spec: CodeSpec) -> Result<Self> {
        let interleaver = QppInterleaver::new(spec.k, spec.f1, spec.f2)?;
        Ok(TurboCodeConfig {
            spec,
            interleaver,
            trellis: TrellisSpec::default(),
        })
    }

    /// K=40 code with the standard LTE interleaver.
    pub fn lte40(punctured: bool) -> Self {
        Self::new(CodeSpec::lte40(punctured)).expect("LTE K=40 interleaver is valid")
    }

    /// Block length with the default interleaver for `k`.
    pub fn with_default_interleaver(k: usize, punctured: bool) -> Result<Self> {
        let (f1, f2) = default_qpp(k)?;
        Self::new(CodeSpec {
            k,
            f1,
            f2,
            punctured,
        })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn k(&self) -> usize {
        self.spec.k
    }

    pub fn punctured(&self) -> bool {
        self.spec.punctured
    }

    /// Flattened codeword length `N`.
    pub fn n(&self) -> usize {
        self.spec.codeword_len()
    }

    pub fn rate(&self) -> f64 {
        self.spec.rate()
    }

    pub fn interleaver(&self) -> &QppInterleaver {
        &self.interleaver
    }

    pub fn trellis(&self) -> &TrellisSpec {
        &self.trellis
    }

    pub fn qpp_interleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.interleaver.interleave(seq)
    }

    pub fn qpp_deinterleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.interleaver.deinterleave(seq)
    }
}

/// Output of the turbo encoder before multiplexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub systematic: Vec<Bit>,
    pub parity1: Vec<Bit>,
    pub parity2: Vec<Bit>,
    /// `x z x z x z` of encoder 1, then `x' z' x' z' x' z'` of encoder 2.
    pub tail: [Bit; TAIL_BITS],
}

/// Encodes one information block with both constituent encoders.
pub fn turbo_encode(config: &TurboCodeConfig, u: &[Bit]) -> Result<Codeword> {
    if u.len() != config.k() {
        return Err(Error::LengthMismatch {
            expected: config.k(),
            actual: u.len(),
        });
    }
    let enc1 = rsce_encode(config.trellis(), u)?;
    let enc2 = rsce_encode(config.trellis(), &config.qpp_interleave(u)?)?;
    let mut tail = [0; TAIL_BITS];
    for i in 0..MEMORY {
        tail[2 * i] = enc1.tail_systematic[i];
        tail[2 * i + 1] = enc1.tail_parity[i];
        tail[2 * MEMORY + 2 * i] = enc2.tail_systematic[i];
        tail[2 * MEMORY + 2 * i + 1] = enc2.tail_parity[i];
    }
    Ok(Codeword {
        systematic: enc1.systematic,
        parity1: enc1.parity,
        parity2: enc2.parity,
        tail,
    })
}

/// Whether parity stream `which` (1 or 2) survives puncturing at position `k`.
#[inline]
pub fn parity_kept(punctured: bool, which: usize, k: usize) -> bool {
    !punctured || (which == 1) == k.is_multiple_of(2)
}

/// Multiplexes the codeword into its transmitted bit order, puncturing if configured.
pub fn puncture(config: &TurboCodeConfig, codeword: &Codeword) -> Result<Vec<Bit>> {
    let k = config.k();
    for len in [
        codeword.systematic.len(),
        codeword.parity1.len(),
        codeword.parity2.len(),
    ] {
        if len != k {
            return Err(Error::LengthMismatch {
                expected: k,
                actual: len,
            });
        }
    }
    let p = config.punctured();
    let mut out = Vec::with_capacity(config.n());
    for i in 0..k {
        out.push(codeword.systematic[i]);
        if parity_kept(p, 1, i) {
            out.push(codeword.parity1[i]);
        }
        if parity_kept(p, 2, i) {
            out.push(codeword.parity2[i]);
        }
    }
    out.extend_from_slice(&codeword.tail);
    Ok(out)
}

/// Encodes and multiplexes in one go.
pub fn encode_flat(config: &TurboCodeConfig, u: &[Bit]) -> Result<Vec<Bit>> {
    puncture(config, &turbo_encode(config, u)?)
}

/// Splits received LLRs in transmitted order back into a frame; punctured
/// parity positions become 0.0.
pub fn depuncture(config: &TurboCodeConfig, llrs: &[f64]) -> Result<LlrFrame> {
    if llrs.len() != config.n() {
        return Err(Error::LengthMismatch {
            expected: config.n(),
            actual: llrs.len(),
        });
    }
    let k = config.k();
    let p = config.punctured();
    let mut frame = LlrFrame::zeros(k);
    let mut it = llrs.iter().copied();
    for i in 0..k {
        frame.ys[i] = it.next().unwrap_or_default();
        if parity_kept(p, 1, i) {
            frame.y1p[i] = it.next().unwrap_or_default();
        }
        if parity_kept(p, 2, i) {
            frame.y2p[i] = it.next().unwrap_or_default();
        }
    }
    for t in frame.tail.iter_mut() {
        *t = it.next().unwrap_or_default();
    }
    Ok(frame)
}
