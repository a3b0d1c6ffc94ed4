//! Bit tricks on `u32` atom masks.

/// Submasks of `mask` in ascending numeric order, including `0` and `mask`.
pub fn submasks(mask: u32) -> Submasks {
    Submasks {
        mask,
        next: Some(0),
    }
}

pub struct Submasks {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        let succ = ((cur | !self.mask).wrapping_add(1)) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(cur)
    }
}

/// Packs the bits of `mask` selected by `keep` into the low bits (software `pext`).
pub fn compact(mask: u32, keep: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut k = keep;
    while k != 0 {
        let low = k & k.wrapping_neg();
        if mask & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        k &= k - 1;
    }
    out
}

/// Inverse of [`compact`]: scatters the low bits of `local` onto the positions of `keep`.
pub fn expand(local: u32, keep: u32) -> u32 {
    let mut out = 0;
    let mut bit = 0;
    let mut k = keep;
    while k != 0 {
        let low = k & k.wrapping_neg();
        if local & (1 << bit) != 0 {
            out |= low;
        }
        bit += 1;
        k &= k - 1;
    }
    out
}

pub fn full(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn is_subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_ascending() {
        let subs: Vec<u32> = submasks(0b1010).collect();
        assert_eq!(subs, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(submasks(0b111).count(), 8);
    }

    #[test]
    fn compact_expand_inverse() {
        let keep = 0b10110;
        for local in 0..8 {
            assert_eq!(compact(expand(local, keep), keep), local);
        }
        assert_eq!(compact(0b11111, keep), 0b111);
        assert_eq!(expand(0b101, keep), 0b10010);
    }
}
