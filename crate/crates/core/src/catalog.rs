//! Built-in fans used by the examples, tests and the command line.
//!
//! Ray indices are 0-based here; the command line shows them 1-based.

use crate::toric_lattice::{validate_fan, FanInput, ToricData};
use crate::{int, Rational};

pub struct CatalogEntry {
    pub key: &'static str,
    pub title: &'static str,
    pub input: fn() -> FanInput,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry { key: "f2", title: "Hirzebruch surface F_2", input: f2_input },
    CatalogEntry { key: "p3-z2", title: "crepant resolution of P^3/Z_2, P(O(2,-2)+O) over P^1xP^1", input: p3_z2_input },
    CatalogEntry { key: "p1xp1-z2", title: "crepant resolution of (P^1xP^1)/Z_2", input: p1xp1_z2_input },
    CatalogEntry { key: "p112-z2", title: "crepant resolution of P(1,1,2)/Z_2", input: p112_z2_input },
    CatalogEntry { key: "p2-z3", title: "crepant resolution of P^2/Z_3", input: p2_z3_input },
    CatalogEntry { key: "p1", title: "projective line P^1", input: p1_input },
    CatalogEntry { key: "p2", title: "projective plane P^2", input: p2_input },
    CatalogEntry { key: "p1xp1", title: "P^1xP^1", input: p1xp1_input },
];

pub fn lookup(key: &str) -> Option<FanInput> {
    ENTRIES.iter().find(|e| e.key == key).map(|e| (e.input)())
}

/// Every catalog fan, validated.
pub fn all() -> Vec<ToricData> {
    ENTRIES.iter().map(|e| build(e.input)).collect()
}

fn build(input: fn() -> FanInput) -> ToricData {
    validate_fan(input()).expect("catalog fans are valid")
}

fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
    data.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn cones(one_based: &[&[usize]]) -> Vec<Vec<usize>> {
    one_based.iter().map(|c| c.iter().map(|i| i - 1).collect()).collect()
}

fn fan(name: &str, rays: &[&[i64]], max_cones: &[&[usize]], basis: Option<&[&[i64]]>) -> FanInput {
    FanInput {
        name: name.into(),
        dimension: rays[0].len(),
        rays: rays.iter().map(|r| r.to_vec()).collect(),
        max_cones: cones(max_cones),
        curve_basis: basis.map(rows),
        ample: None,
    }
}

pub fn f2_input() -> FanInput {
    fan(
        "f2",
        &[&[0, -1], &[0, 1], &[-1, 1], &[1, 1]],
        &[&[1, 3], &[2, 3], &[2, 4], &[1, 4]],
        Some(&[&[0, -2, 1, 1], &[1, 1, 0, 0]]),
    )
}

pub fn p3_z2_input() -> FanInput {
    let mut max_cones: Vec<Vec<usize>> = Vec::new();
    for i in [1, 2] {
        for k in [3, 4] {
            for f in [5, 6] {
                max_cones.push(vec![i, k, f]);
            }
        }
    }
    let refs: Vec<&[usize]> = max_cones.iter().map(Vec::as_slice).collect();
    fan(
        "p3-z2",
        &[&[1, 0, -1], &[-1, 0, -1], &[0, 1, 1], &[0, -1, 1], &[0, 0, 1], &[0, 0, -1]],
        &refs,
        Some(&[&[0, 0, 1, 1, -2, 0], &[1, 1, 0, 0, 0, -2], &[0, 0, 0, 0, 1, 1]]),
    )
}

pub fn p1xp1_z2_input() -> FanInput {
    fan(
        "p1xp1-z2",
        &[&[-1, 1], &[1, 1], &[1, -1], &[-1, -1], &[0, 1], &[1, 0], &[0, -1], &[-1, 0]],
        &[&[6, 2], &[2, 5], &[5, 1], &[1, 8], &[8, 4], &[4, 7], &[7, 3], &[3, 6]],
        Some(&[
            &[1, 1, 0, 0, -2, 0, 0, 0],
            &[0, 1, 1, 0, 0, -2, 0, 0],
            &[0, 0, 1, 1, 0, 0, -2, 0],
            &[1, 0, 0, 1, 0, 0, 0, -2],
            &[-2, -1, -2, -1, 2, 2, 2, 2],
            &[-1, -2, -1, -2, 2, 2, 2, 2],
        ]),
    )
}

pub fn p112_z2_input() -> FanInput {
    fan(
        "p112-z2",
        &[&[-2, 1], &[2, 1], &[0, -1], &[-1, 1], &[0, 1], &[1, 1], &[1, 0], &[-1, 0]],
        &[&[7, 2], &[2, 6], &[6, 5], &[5, 4], &[4, 1], &[1, 8], &[8, 3], &[3, 7]],
        Some(&[
            &[1, 0, 0, -2, 1, 0, 0, 0],
            &[0, 0, 0, 1, -2, 1, 0, 0],
            &[0, 1, 0, 0, 1, -2, 0, 0],
            &[0, 1, 1, 0, 0, 0, -2, 0],
            &[1, 0, 1, 0, 0, 0, 0, -2],
            &[-2, -2, -1, 2, -1, 2, 2, 2],
        ]),
    )
}

pub fn p2_z3_input() -> FanInput {
    fan(
        "p2-z3",
        &[&[0, 1], &[1, 0], &[1, -1], &[0, -1], &[-1, 0], &[-1, 1], &[-1, 2], &[2, -1], &[-1, -1]],
        &[&[2, 1], &[1, 7], &[7, 6], &[6, 5], &[5, 9], &[9, 4], &[4, 3], &[3, 8], &[8, 2]],
        Some(&[
            &[-2, 1, 0, 0, 0, 0, 1, 0, 0],
            &[1, -2, 0, 0, 0, 0, 0, 1, 0],
            &[0, 0, -2, 1, 0, 0, 0, 1, 0],
            &[0, 0, 1, -2, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, -2, 1, 0, 0, 1],
            &[0, 0, 0, 0, 1, -2, 1, 0, 0],
            &[2, 2, 2, 2, 2, 2, -3, -3, -3],
        ]),
    )
}

pub fn p1_input() -> FanInput {
    fan("p1", &[&[1], &[-1]], &[&[1], &[2]], None)
}

pub fn p2_input() -> FanInput {
    fan("p2", &[&[1, 0], &[0, 1], &[-1, -1]], &[&[1, 2], &[2, 3], &[3, 1]], None)
}

pub fn p1xp1_input() -> FanInput {
    fan("p1xp1", &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[1, 3], &[3, 2], &[2, 4], &[4, 1]], None)
}

pub fn hirzebruch_f2() -> ToricData {
    build(f2_input)
}

pub fn p3_z2() -> ToricData {
    build(p3_z2_input)
}

pub fn p1xp1_z2() -> ToricData {
    build(p1xp1_z2_input)
}

pub fn p112_z2() -> ToricData {
    build(p112_z2_input)
}

pub fn p2_z3() -> ToricData {
    build(p2_z3_input)
}

pub fn projective_line() -> ToricData {
    build(p1_input)
}

pub fn projective_plane() -> ToricData {
    build(p2_input)
}

pub fn p1xp1() -> ToricData {
    build(p1xp1_input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates() {
        for e in ENTRIES {
            let data = validate_fan((e.input)()).unwrap_or_else(|err| panic!("{}: {err}", e.key));
            assert_eq!(data.rank(), data.num_rays() - data.dimension(), "{}", e.key);
        }
    }

    #[test]
    fn curve_basis_rows_are_relations() {
        for data in all() {
            for row in data.curve_basis() {
                for coord in 0..data.dimension() {
                    let s: Rational = row.iter().zip(data.rays()).map(|(x, b)| x * int(b[coord])).sum();
                    assert_eq!(s, int(0), "{}", data.name());
                }
            }
        }
    }
}
