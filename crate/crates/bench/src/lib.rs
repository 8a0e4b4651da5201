//! Shared inputs for the benchmarks.

use nib_core::group::all_subgroups;
use nib_core::spec::tower_from_parts;
use nib_core::units::unit_group;
use nib_core::{AbelianField, ElementSet, Tower};

/// Towers that exercise splitting and the obstruction checks.
pub fn towers() -> Vec<(&'static str, Tower)> {
    [
        ("real15", "Q", "maxreal:15", "cyclotomic:15"),
        ("cyclic31", "Q", "cyclic_subfield:31:3", "cyclic_subfield:31:15"),
        ("cyc63", "Q", "maxreal:63", "cyclotomic:63"),
        ("cyc91", "cyclic_subfield:7:3", "cyclotomic:7", "cyclotomic:91"),
    ]
    .into_iter()
    .map(|(name, k, m, l)| (name, tower_from_parts(k, m, l).expect("fixture towers are valid")))
    .collect()
}

/// Every subfield of `Q(zeta_n)`.
pub fn subfields(n: u64) -> Vec<AbelianField> {
    let ug = unit_group(n);
    all_subgroups(ug.group()).iter().map(|h| AbelianField::from_subgroup(n, h)).collect()
}

/// The subgroup of `g` generated by its first cyclic factor.
pub fn first_factor(g: &nib_core::AbelianGroup) -> ElementSet {
    let mut e = g.zero();
    if let Some(x) = e.first_mut() {
        *x = 1;
    }
    g.span(&[e])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(towers().len(), 4);
        assert_eq!(subfields(15).len(), 8);
        let g = nib_core::AbelianGroup::new(vec![3, 9]);
        assert_eq!(first_factor(&g).len(), 3);
    }
}
