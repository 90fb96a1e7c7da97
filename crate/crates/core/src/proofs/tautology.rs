//! Recognizing substitution instances of propositional tautologies.

use alloc::vec::Vec;

use crate::syntax::Formula;

/// Most distinct atoms a candidate may have before it is rejected.
pub const MAX_ATOMS: usize = 24;

/// Whether `f` is a substitution instance of a propositional tautology.
///
/// Every maximal subformula not built from `!`, `&` and `true` becomes an
/// atom, with syntactically equal subformulas sharing one atom. The truth
/// table is evaluated 64 rows at a time. Formulas with more than
/// [`MAX_ATOMS`] atoms are rejected.
pub fn is_tautology(f: &Formula) -> bool {
    let mut atoms: Vec<&Formula> = Vec::new();
    collect(f, &mut atoms);
    let n = atoms.len();
    if n > MAX_ATOMS {
        return false;
    }
    // Columns for the six low atoms within a block of 64 rows.
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let rows_mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    let blocks = 1usize << n.saturating_sub(6);
    let mut cols = alloc::vec![0u64; n];
    for block in 0..blocks {
        for (j, c) in cols.iter_mut().enumerate() {
            *c = if j < 6 {
                LOW[j]
            } else if block >> (j - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if eval(f, &atoms, &cols) & rows_mask != rows_mask {
            return false;
        }
    }
    true
}

fn collect<'f>(f: &'f Formula, atoms: &mut Vec<&'f Formula>) {
    match f {
        Formula::Top => {}
        Formula::Not(a) => collect(a, atoms),
        Formula::And(a, b) => {
            collect(a, atoms);
            collect(b, atoms);
        }
        _ => {
            if !atoms.contains(&f) {
                atoms.push(f);
            }
        }
    }
}

fn eval(f: &Formula, atoms: &[&Formula], cols: &[u64]) -> u64 {
    match f {
        Formula::Top => u64::MAX,
        Formula::Not(a) => !eval(a, atoms, cols),
        Formula::And(a, b) => eval(a, atoms, cols) & eval(b, atoms, cols),
        _ => cols[atoms.iter().position(|a| *a == f).expect("collected")],
    }
}
