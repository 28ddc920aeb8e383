//! Dense rank-2..5 complex arrays over a single dimension n (n <= 9 here,
//! so flat Vec storage with computed strides is plenty).

use crate::C64;

macro_rules! arr_type {
    ($name:ident, $rank:expr, ($($ix:ident),+)) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            n: usize,
            data: Vec<C64>,
        }

        impl $name {
            pub fn zeros(n: usize) -> Self {
                Self { n, data: vec![C64::new(0.0, 0.0); n.pow($rank)] }
            }

            #[inline]
            fn pos(&self, $($ix: usize),+) -> usize {
                let mut p = 0;
                $(
                    debug_assert!($ix < self.n);
                    p = p * self.n + $ix;
                )+
                p
            }

            #[inline]
            pub fn get(&self, $($ix: usize),+) -> C64 {
                self.data[self.pos($($ix),+)]
            }

            #[inline]
            pub fn set(&mut self, $($ix: usize),+, v: C64) {
                let p = self.pos($($ix),+);
                self.data[p] = v;
            }

            #[inline]
            pub fn add(&mut self, $($ix: usize),+, v: C64) {
                let p = self.pos($($ix),+);
                self.data[p] += v;
            }

            pub fn n(&self) -> usize {
                self.n
            }

            pub fn data(&self) -> &[C64] {
                &self.data
            }

            pub fn max_norm(&self) -> f64 {
                self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
            }

            pub fn is_all_exactly_zero(&self) -> bool {
                self.data.iter().all(|c| c.re == 0.0 && c.im == 0.0)
            }
        }
    };
}

arr_type!(Arr2, 2, (i0, i1));
arr_type!(Arr3, 3, (i0, i1, i2));
arr_type!(Arr4, 4, (i0, i1, i2, i3));
arr_type!(Arr5, 5, (i0, i1, i2, i3, i4));

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut a = Arr3::zeros(4);
        a.set(1, 2, 3, C64::new(2.5, -1.0));
        a.add(1, 2, 3, C64::new(0.5, 0.0));
        assert_eq!(a.get(1, 2, 3), C64::new(3.0, -1.0));
        assert_eq!(a.get(3, 2, 1), C64::new(0.0, 0.0));
        assert!(!a.is_all_exactly_zero());
        assert_eq!(a.max_norm(), C64::new(3.0, -1.0).norm());
    }
}
