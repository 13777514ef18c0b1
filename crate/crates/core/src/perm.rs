//! Permutations of at most eight points.

use alloc::vec::Vec;

use crate::partition::Partition;

pub const MAX_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    img: [u8; MAX_POINTS],
    d: u8,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        assert!(d <= MAX_POINTS);
        let mut img = [0u8; MAX_POINTS];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm { img, d: d as u8 }
    }

    /// Canonical element of cycle type `nu`: cycles on consecutive blocks.
    pub fn of_cycle_type(nu: &Partition) -> Self {
        let mut p = Perm::identity(nu.size() as usize);
        let mut start = 0usize;
        for &len in nu.parts() {
            let len = len as usize;
            for t in 0..len {
                p.img[start + t] = (start + (t + 1) % len) as u8;
            }
            start += len;
        }
        p
    }

    pub fn from_images(images: &[u8]) -> Self {
        let mut p = Perm::identity(images.len());
        p.img[..images.len()].copy_from_slice(images);
        p
    }

    pub fn degree(&self) -> usize {
        self.d as usize
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    /// `(a b) ∘ self`.
    pub fn left_transpose(&self, a: usize, b: usize) -> Self {
        let mut out = *self;
        for v in out.img[..self.d as usize].iter_mut() {
            if *v as usize == a {
                *v = b as u8;
            } else if *v as usize == b {
                *v = a as u8;
            }
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = 0u16;
        let mut count = 0;
        for s in 0..self.d as usize {
            if seen & (1 << s) != 0 {
                continue;
            }
            count += 1;
            let mut x = s;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                x = self.img[x] as usize;
            }
        }
        count
    }

    pub fn cycle_type(&self) -> Partition {
        let mut seen = 0u16;
        let mut lens = Vec::new();
        for s in 0..self.d as usize {
            if seen & (1 << s) != 0 {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                x = self.img[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        Partition::new(lens).expect("cycle lengths are positive")
    }

    /// Three bits per point.
    pub fn code(&self) -> u32 {
        self.img[..self.d as usize]
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &v)| acc | (v as u32) << (3 * i))
    }
}

/// All transpositions `(a, b)` with `a < b < d`, lexicographically.
pub fn transpositions(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            out.push((a, b));
        }
    }
    out
}

/// Every permutation of `d` points (Heap's algorithm).
pub fn all_permutations(d: usize) -> Vec<Perm> {
    let mut a: Vec<u8> = (0..d as u8).collect();
    let mut out = alloc::vec![Perm::from_images(&a)];
    let mut c = alloc::vec![0usize; d];
    let mut i = 0;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(Perm::from_images(&a));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_cycle_type() {
        let nu = Partition::new(alloc::vec![3, 2, 2, 1]).unwrap();
        assert_eq!(Perm::of_cycle_type(&nu).cycle_type(), nu);
    }

    #[test]
    fn transposition_changes_cycle_count_by_one() {
        let p = Perm::of_cycle_type(&Partition::new(alloc::vec![3, 2]).unwrap());
        for (a, b) in transpositions(5) {
            let q = p.left_transpose(a, b);
            assert_eq!((q.cycle_count() as i64 - p.cycle_count() as i64).abs(), 1);
            for x in 0..5 {
                let px = p.apply(x);
                let tx = if px == a { b } else if px == b { a } else { px };
                assert_eq!(q.apply(x), tx);
            }
        }
    }

    #[test]
    fn heap_count() {
        assert_eq!(all_permutations(5).len(), 120);
        let mut codes: Vec<u32> = all_permutations(4).iter().map(|p| p.code()).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), 24);
    }
}
