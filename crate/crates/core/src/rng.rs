//! Deterministic counter-based random number generation.
//!
//! Every deviate is a pure function of a stream key and a counter, so draws
//! can be produced in any order (or in parallel) and remain bit-identical.
//! Keys are derived by hashing a user seed together with string labels and
//! integer indices; distinct counters within one stream can never collide
//! because the counter is passed through a bijective mix before hashing.
//!
//! Uniform deviates use the splitmix64 finalizer; Gaussians apply the
//! Box-Muller transform to consecutive counter pairs.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer, a bijective 64-bit mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A keyed random stream. Cheap to copy; all draw methods take `&self`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        StreamKey(mix64(seed.wrapping_add(GOLDEN)))
    }

    /// Substream for an integer index (replication, truth, ...).
    pub fn child(&self, index: u64) -> Self {
        StreamKey(mix64(
            self.0
                ^ mix64(
                    index
                        .wrapping_add(GOLDEN)
                        .wrapping_mul(0xD1B5_4A32_D192_ED03),
                ),
        ))
    }

    /// Substream for a string label ("noise", "design", ...).
    pub fn labeled(&self, label: &str) -> Self {
        let mut h = 0xCBF2_9CE4_8422_2325u64; // FNV-1a
        for &b in label.as_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        StreamKey(mix64(self.0 ^ mix64(h)))
    }

    #[inline]
    fn word(&self, counter: u64) -> u64 {
        // (c + G) * G is a bijection on u64, so counters never collide.
        mix64(self.0 ^ counter.wrapping_add(GOLDEN).wrapping_mul(GOLDEN))
    }

    /// Uniform deviate in the open interval (0, 1).
    #[inline]
    pub fn uniform(&self, counter: u64) -> f64 {
        (((self.word(counter) >> 11) as f64) + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform deviate in (lo, hi).
    #[inline]
    pub fn uniform_in(&self, counter: u64, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform(counter)
    }

    /// Standard Gaussian pair generated from counters (2i, 2i+1).
    #[inline]
    pub fn gaussian_pair(&self, pair_index: u64) -> (f64, f64) {
        let u1 = self.uniform(2 * pair_index);
        let u2 = self.uniform(2 * pair_index + 1);
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        (r * t.cos(), r * t.sin())
    }

    /// k-th standard Gaussian of the stream.
    #[inline]
    pub fn gaussian(&self, index: u64) -> f64 {
        let (a, b) = self.gaussian_pair(index / 2);
        if index.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    /// Fills `out` with the Gaussians at indices 0..len, consistent with
    /// [`StreamKey::gaussian`].
    pub fn fill_gaussian(&self, out: &mut [f64]) {
        let mut i = 0;
        while i + 1 < out.len() {
            let (a, b) = self.gaussian_pair((i as u64) / 2);
            out[i] = a;
            out[i + 1] = b;
            i += 2;
        }
        if i < out.len() {
            out[i] = self.gaussian(i as u64);
        }
    }
}
