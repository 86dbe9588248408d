//! Per-dimension sweeps over a `2^n`-bit membership bitmap. Bit `T` of the
//! bitmap stands for subset `T`, so dimension `d` pairs bit `T` (with `d ∉ T`)
//! and bit `T | 1<<d`.

const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sweep {
    /// `T ∈ Ω ⇒ T ∪ {d} ∈ Ω`.
    UpOr,
    /// `T ∈ Ω ⇒ T \ {d} ∈ Ω`.
    DownOr,
    /// `T ↦ T Δ {d}`.
    Swap,
    /// `{T ∪ {d} : T ∈ Ω, d ∉ T}`.
    ShiftUp,
    /// `{T \ {d} : T ∈ Ω, d ∈ T}`.
    ShiftDown,
}

pub(crate) fn word_count(n: usize) -> usize {
    if n >= 6 {
        1usize << (n - 6)
    } else {
        1
    }
}

/// Mask of the valid bits in every word (only the single word is partial for n < 6).
pub(crate) fn valid_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1usize << n)) - 1
    }
}

pub(crate) fn sweep(words: &mut [u64], d: usize, op: Sweep) {
    if d < 6 {
        let low = LOW[d];
        let s = 1u32 << d;
        for w in words.iter_mut() {
            *w = match op {
                Sweep::UpOr => *w | (*w & low) << s,
                Sweep::DownOr => *w | (*w >> s) & low,
                Sweep::Swap => (*w & low) << s | (*w >> s) & low,
                Sweep::ShiftUp => (*w & low) << s,
                Sweep::ShiftDown => (*w >> s) & low,
            };
        }
    } else {
        let stride = 1usize << (d - 6);
        for block in words.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (l, h) in lo.iter_mut().zip(hi.iter_mut()) {
                match op {
                    Sweep::UpOr => *h |= *l,
                    Sweep::DownOr => *l |= *h,
                    Sweep::Swap => std::mem::swap(l, h),
                    Sweep::ShiftUp => {
                        *h = *l;
                        *l = 0;
                    }
                    Sweep::ShiftDown => {
                        *l = *h;
                        *h = 0;
                    }
                }
            }
        }
    }
}

/// Reverses the bitmap, i.e. maps bit `T` to bit `Δ \ T`.
pub(crate) fn reverse(words: &mut [u64], n: usize) {
    if n < 6 {
        let w = words[0].reverse_bits();
        words[0] = w >> (64 - (1usize << n));
    } else {
        words.reverse();
        for w in words.iter_mut() {
            *w = w.reverse_bits();
        }
    }
}
