use super::{tri_coords, TripartiteBox};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The 6 + 12 + 8 expectation values that fix a no-signalling box.
///
/// `singles[k][s]` is `⟨X_s⟩` for party `k`; `pairs[0]`, `pairs[1]`,
/// `pairs[2]` hold `⟨A_xB_y⟩`, `⟨A_xC_z⟩` and `⟨B_yC_z⟩` indexed by the two
/// settings; `triples[x][y][z]` is `⟨A_xB_yC_z⟩`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelatorSet {
    pub singles: [[f64; 2]; 3],
    pub pairs: [[[f64; 2]; 2]; 3],
    pub triples: [[[f64; 2]; 2]; 2],
}

#[inline]
fn sign(bits: usize) -> f64 {
    if bits & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl CorrelatorSet {
    /// Correlators of `bx`. Singles and pairs are read with the remaining
    /// parties' settings at 0, which is exact for no-signalling boxes.
    pub fn of_box(bx: &TripartiteBox) -> CorrelatorSet {
        let mut cs = CorrelatorSet::default();
        for (i, &v) in bx.entries().iter().enumerate() {
            let [x, y, z, a, b, c] = tri_coords(i);
            cs.triples[x][y][z] += sign(a ^ b ^ c) * v;
            if z == 0 {
                cs.pairs[0][x][y] += sign(a ^ b) * v;
            }
            if y == 0 {
                cs.pairs[1][x][z] += sign(a ^ c) * v;
            }
            if x == 0 {
                cs.pairs[2][y][z] += sign(b ^ c) * v;
            }
            if y == 0 && z == 0 {
                cs.singles[0][x] += sign(a) * v;
            }
            if x == 0 && z == 0 {
                cs.singles[1][y] += sign(b) * v;
            }
            if x == 0 && y == 0 {
                cs.singles[2][z] += sign(c) * v;
            }
        }
        cs
    }

    /// Rebuilds the box from its correlator expansion. Fails with
    /// [`Error::NotABox`] if an entry comes out below `-tol`.
    pub fn to_box(&self, tol: f64) -> Result<TripartiteBox> {
        if let Some(v) = self.values().find(|v| !(v.abs() <= 1.0 + tol)) {
            return Err(Error::CorrelatorRange { value: v });
        }
        let bx = TripartiteBox::from_fn(|x, y, z, a, b, c| {
            (1.0 + sign(a) * self.singles[0][x]
                + sign(b) * self.singles[1][y]
                + sign(c) * self.singles[2][z]
                + sign(a ^ b) * self.pairs[0][x][y]
                + sign(a ^ c) * self.pairs[1][x][z]
                + sign(b ^ c) * self.pairs[2][y][z]
                + sign(a ^ b ^ c) * self.triples[x][y][z])
                / 8.0
        });
        if let Some((index, &value)) = bx.entries().iter().enumerate().find(|(_, &v)| v < -tol) {
            return Err(Error::NotABox { index, value });
        }
        Ok(bx)
    }

    /// All 26 values: singles, then pairs, then triples.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.singles
            .iter()
            .flatten()
            .chain(self.pairs.iter().flatten().flatten())
            .chain(self.triples.iter().flatten().flatten())
            .copied()
    }

    pub fn triple(&self, x: usize, y: usize, z: usize) -> f64 {
        self.triples[x][y][z]
    }

    pub fn max_abs_diff(&self, other: &CorrelatorSet) -> f64 {
        self.values().zip(other.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn box_from_correlators(cs: &CorrelatorSet, tol: f64) -> Result<TripartiteBox> {
    cs.to_box(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{family_box, svetlichny_vertex, FamilyParam};

    #[test]
    fn uniform_has_zero_correlators() {
        assert!(TripartiteBox::uniform().correlators().values().all(|v| v == 0.0));
    }

    #[test]
    fn mermin_correlators() {
        let v = 0.37;
        let cs = family_box(&FamilyParam::mermin(v).unwrap()).correlators();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let expected = match (x, y, z) {
                        (0, 0, 1) | (0, 1, 0) | (1, 0, 0) => v,
                        (1, 1, 1) => -v,
                        _ => 0.0,
                    };
                    assert!((cs.triple(x, y, z) - expected).abs() < 1e-15);
                }
            }
        }
        assert!(cs.singles.iter().flatten().chain(cs.pairs.iter().flatten().flatten()).all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn svetlichny_vertex_triples() {
        let cs = svetlichny_vertex(0, 0, 0, 0).correlators();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let s = sign((x & y) ^ (y & z) ^ (x & z));
                    assert!((cs.triple(x, y, z) - s).abs() < 1e-15);
                }
            }
        }
        assert!(cs.singles.iter().flatten().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn negative_reconstruction_is_not_a_box() {
        let mut cs = CorrelatorSet::default();
        cs.singles[0][0] = 1.0;
        cs.triples[0][0][0] = 1.0;
        assert!(matches!(cs.to_box(1e-9), Err(Error::NotABox { .. })));
        cs.triples[0][0][0] = 1.5;
        assert!(matches!(cs.to_box(1e-9), Err(Error::CorrelatorRange { .. })));
    }
}
