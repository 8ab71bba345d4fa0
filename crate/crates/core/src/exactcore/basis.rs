use serde::Serialize;

use crate::error::{param, Error, Result};

/// Largest ring length accepted by [`SectorBasis::new`].
pub const MAX_SITES: usize = 63;
/// Largest sector enumerated.
pub const MAX_SECTOR_LEN: usize = 50_000_000;

/// All `n_sites`-bit configurations with exactly `n_up` set bits, in
/// ascending integer order. Bit `i` set means the spin at site `i + 1` is up.
///
/// Ascending integer order on fixed-popcount masks coincides with
/// colexicographic order on the sets of up sites, so a configuration's index
/// is its colex rank and can be computed without a lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectorBasis {
    n_sites: usize,
    n_up: usize,
    configs: Vec<u64>,
    #[serde(skip)]
    binom: Vec<Vec<usize>>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, n_up: usize) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&n_sites) {
            return param(format!("ring length {n_sites} outside 2..={MAX_SITES}"));
        }
        if n_up > n_sites {
            return param(format!("{n_up} up spins do not fit on {n_sites} sites"));
        }
        let len = binomial_u128(n_sites, n_up);
        if len > MAX_SECTOR_LEN as u128 {
            return Err(Error::Resource {
                dim: usize::try_from(len).unwrap_or(usize::MAX),
                limit: MAX_SECTOR_LEN,
            });
        }
        let binom = pascal(n_sites);
        let mut configs = Vec::with_capacity(binom[n_sites][n_up]);
        if n_up == 0 {
            configs.push(0);
        } else {
            // Gosper's hack walks fixed-popcount masks in increasing order.
            let mut c: u64 = (1u64 << n_up) - 1;
            let limit: u128 = 1u128 << n_sites;
            while (c as u128) < limit {
                configs.push(c);
                let lowest = c & c.wrapping_neg();
                let ripple = c as u128 + lowest as u128;
                if ripple >= limit {
                    break;
                }
                let ripple = ripple as u64;
                c = (((ripple ^ c) >> 2) / lowest) | ripple;
            }
        }
        debug_assert_eq!(configs.len(), binom[n_sites][n_up]);
        Ok(Self {
            n_sites,
            n_up,
            configs,
            binom,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[u64] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> u64 {
        self.configs[index]
    }

    /// Index of `config` in this basis, or `None` when the mask has the wrong
    /// popcount or sets bits beyond the ring.
    pub fn index_of(&self, config: u64) -> Option<usize> {
        if config.count_ones() as usize != self.n_up || (config >> self.n_sites) != 0 {
            return None;
        }
        Some(self.rank(config))
    }

    /// Colex rank of a mask known to belong to this sector.
    #[inline]
    pub(crate) fn rank(&self, config: u64) -> usize {
        let mut rest = config;
        let mut rank = 0;
        let mut j = 1;
        while rest != 0 {
            let site = rest.trailing_zeros() as usize;
            rank += self.binom[site][j];
            j += 1;
            rest &= rest - 1;
        }
        rank
    }

    /// Binomial coefficient `C(a, b)` for `a <= n_sites`.
    pub fn binomial(&self, a: usize, b: usize) -> usize {
        if b > a {
            0
        } else {
            self.binom[a][b]
        }
    }

    /// Human-readable sector tag used in error messages.
    pub fn tag(&self) -> String {
        format!("N={} up={}", self.n_sites, self.n_up)
    }

    /// Cyclic shift taking the spin at site `i` to site `i + 1` (mod N).
    #[inline]
    pub fn translate_config(&self, config: u64) -> u64 {
        let mask = if self.n_sites == 64 {
            u64::MAX
        } else {
            (1u64 << self.n_sites) - 1
        };
        ((config << 1) | (config >> (self.n_sites - 1))) & mask
    }

    /// 1-based site numbers of the up spins of `config`, ascending.
    pub fn up_sites(config: u64) -> impl Iterator<Item = usize> {
        let mut rest = config;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let s = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(s + 1)
            }
        })
    }
}

fn pascal(n: usize) -> Vec<Vec<usize>> {
    let mut table = vec![vec![0usize; n + 2]; n + 1];
    for a in 0..=n {
        table[a][0] = 1;
        for b in 1..=a {
            table[a][b] = table[a - 1][b - 1] + if b < a { table[a - 1][b] } else { 0 };
        }
    }
    table
}

fn binomial_u128(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128)
}

/// Binomial coefficient for small arguments.
pub fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
}
