use core::fmt;

macro_rules! bitset {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: Self = $name(0);

            /// The set `{0, .., n-1}`.
            pub const fn full(n: usize) -> Self {
                if n >= 64 { $name(u64::MAX) } else { $name((1u64 << n) - 1) }
            }

            pub const fn singleton(i: usize) -> Self {
                $name(1u64 << i)
            }

            pub const fn contains(self, i: usize) -> bool {
                self.0 >> i & 1 == 1
            }

            pub fn insert(&mut self, i: usize) {
                self.0 |= 1u64 << i;
            }

            pub fn remove(&mut self, i: usize) {
                self.0 &= !(1u64 << i);
            }

            pub const fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub const fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub const fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub const fn union(self, other: Self) -> Self {
                $name(self.0 | other.0)
            }

            pub const fn intersection(self, other: Self) -> Self {
                $name(self.0 & other.0)
            }

            pub const fn difference(self, other: Self) -> Self {
                $name(self.0 & !other.0)
            }

            /// Members in increasing order.
            pub fn iter(self) -> impl Iterator<Item = usize> {
                let mut bits = self.0;
                core::iter::from_fn(move || {
                    if bits == 0 {
                        None
                    } else {
                        let i = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        Some(i)
                    }
                })
            }

            /// Every subset of `self`, in increasing numeric order.
            pub fn subsets(self) -> impl Iterator<Item = Self> {
                let mask = self.0;
                let mut next = Some(0u64);
                core::iter::from_fn(move || {
                    let cur = next?;
                    next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
                    Some($name(cur))
                })
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut s = $name::EMPTY;
                for i in iter {
                    s.insert(i);
                }
                s
            }
        }
    };
}

bitset!(
    /// A set of proposition indices into a structure's `props`.
    PropSet
);
bitset!(
    /// A set of world indices.
    WorldSet
);
