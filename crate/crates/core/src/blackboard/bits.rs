use std::fmt;

/// A sequence of bits, most significant first within each written field.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    /// Appends the low `width` bits of `value`.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width >= 64 || value >> width == 0, "{value} does not fit {width} bits");
        for i in (0..width).rev() {
            self.0.push(value >> i & 1 == 1);
        }
    }

    /// Elias-gamma code of `x ≥ 1`.
    pub fn push_gamma(&mut self, x: u64) {
        assert!(x >= 1);
        let bits = 64 - x.leading_zeros() as usize;
        for _ in 1..bits {
            self.0.push(false);
        }
        self.push_uint(x, bits);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: &self.0, pos: 0 }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("b\"")?;
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str("\"")
    }
}

/// Length in bits of the Elias-gamma code of `x ≥ 1`.
pub fn gamma_len(x: u64) -> usize {
    2 * (63 - x.leading_zeros() as usize) + 1
}

pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_uint(&mut self, width: usize) -> Option<u64> {
        if self.remaining() < width {
            return None;
        }
        let v = self.bits[self.pos..self.pos + width]
            .iter()
            .fold(0u64, |acc, &b| acc << 1 | u64::from(b));
        self.pos += width;
        Some(v)
    }

    pub fn read_gamma(&mut self) -> Option<u64> {
        let zeros = self.bits[self.pos..].iter().position(|&b| b)?;
        if zeros >= 64 {
            return None;
        }
        self.pos += zeros;
        self.read_uint(zeros + 1)
    }

    pub fn read_bits(&mut self, len: usize) -> Option<BitString> {
        if self.remaining() < len {
            return None;
        }
        let out = BitString(self.bits[self.pos..self.pos + len].to_vec());
        self.pos += len;
        Some(out)
    }
}
