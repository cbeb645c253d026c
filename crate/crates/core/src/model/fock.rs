use std::collections::HashMap;

/// Multi-indices `α ∈ ℕⁿ` with `|α| ≤ M`, ordered by level and then
/// lexicographically, with precomputed raising tables.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n: usize,
    max_level: usize,
    alphas: Vec<Vec<u16>>,
    levels: Vec<usize>,
    /// `up[j][k] = (index of α + e_j, √(α_j + 1))` when `|α| < M`.
    up: Vec<Vec<Option<(usize, f64)>>>,
}

fn enumerate(n: usize, max_level: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(pos: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v as u16;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_level, &mut cur, &mut out);
    out.sort_by(|a, b| {
        let la: u32 = a.iter().map(|&x| x as u32).sum();
        let lb: u32 = b.iter().map(|&x| x as u32).sum();
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    out
}

impl FockBasis {
    pub fn new(n: usize, max_level: usize) -> Self {
        let alphas = enumerate(n, max_level);
        let levels: Vec<usize> = alphas.iter().map(|a| a.iter().map(|&x| x as usize).sum()).collect();
        let lookup: HashMap<&[u16], usize> = alphas.iter().enumerate().map(|(k, a)| (a.as_slice(), k)).collect();
        let mut up = vec![vec![None; alphas.len()]; n];
        for (k, a) in alphas.iter().enumerate() {
            if levels[k] == max_level {
                continue;
            }
            for (j, row) in up.iter_mut().enumerate() {
                let mut b = a.clone();
                b[j] += 1;
                row[k] = Some((lookup[b.as_slice()], ((a[j] as f64) + 1.0).sqrt()));
            }
        }
        Self { n, max_level, alphas, levels, up }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, k: usize) -> &[u16] {
        &self.alphas[k]
    }

    pub fn level(&self, k: usize) -> usize {
        self.levels[k]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn index_of(&self, alpha: &[u16]) -> Option<usize> {
        self.alphas.iter().position(|a| a.as_slice() == alpha)
    }

    /// Annihilation `a_j` (0-based `j`): `(a_j v)_α = √(α_j+1) v_{α+e_j}`.
    pub fn annihilate(&self, j: usize, v: &[crate::linalg::C64], scale: f64, out: &mut [crate::linalg::C64]) {
        for (k, entry) in self.up[j].iter().enumerate() {
            if let Some((k2, f)) = entry {
                out[k] += v[*k2] * (f * scale);
            }
        }
    }

    /// Creation `a_j†`, dropping anything pushed above level `M`.
    pub fn create(&self, j: usize, v: &[crate::linalg::C64], scale: f64, out: &mut [crate::linalg::C64]) {
        for (k, entry) in self.up[j].iter().enumerate() {
            if let Some((k2, f)) = entry {
                out[*k2] += v[k] * (f * scale);
            }
        }
    }
}

/// `C(M+n, n)`.
pub fn fock_dim(n: usize, max_level: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c * (max_level as u128 + i) / i;
    }
    c as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        for n in 1..=3 {
            for m in 0..=8 {
                assert_eq!(FockBasis::new(n, m).dim(), fock_dim(n, m));
            }
        }
        assert_eq!(fock_dim(2, 8), 45);
    }

    #[test]
    fn ordering_by_level() {
        let f = FockBasis::new(2, 3);
        assert!(f.levels().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(f.alpha(0), &[0, 0]);
        assert_eq!(f.index_of(&[1, 1]).map(|k| f.level(k)), Some(2));
    }
}
