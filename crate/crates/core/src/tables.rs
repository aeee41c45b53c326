//! Plain-text tables: the exceptional-type census, null classes, and their
//! splittings into exceptional curves.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::enumerate::{enumerate_null_classes, exceptional_type_census, NullClassRecord};
use crate::lattice::{Rank, TypePattern};
use crate::surface::SurfaceContext;

/// Counts of exceptional classes per type, one column per rank `1..=8`.
pub fn exceptional_census_table() -> String {
    let tables: Vec<_> = Rank::all()
        .map(|r| exceptional_type_census(&SurfaceContext::new(r)))
        .collect();
    let mut types: BTreeSet<TypePattern> = BTreeSet::new();
    for t in &tables {
        types.extend(t.counts.keys().cloned());
    }
    let mut out = String::new();
    write!(out, "{:<12}", "type \\ r").unwrap();
    for r in Rank::all() {
        write!(out, "{r:>4}").unwrap();
    }
    out.push('\n');
    for ty in &types {
        write!(out, "{:<12}", ty.to_string()).unwrap();
        for t in &tables {
            write!(out, "{:>4}", t.count(ty)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Null-class representatives of `S_r`, one row per class.
pub fn null_class_table(records: &[NullClassRecord], rank: Rank) -> String {
    let mut out = String::new();
    write!(out, "{:>3}", "a").unwrap();
    for i in 1..=rank.get() {
        write!(out, "{:>4}", format!("b{i}")).unwrap();
    }
    out.push_str("  type\n");
    for rec in records {
        let d = rec.representative;
        write!(out, "{:>3}", d.a()).unwrap();
        for x in d.b() {
            write!(out, "{x:>4}").unwrap();
        }
        writeln!(out, "  {}", d.type_pattern()).unwrap();
    }
    out
}

/// Distinct positive-degree splitting shapes of the null classes, grouped
/// by `a`. Classes with no such splitting are listed by their own type.
pub fn decomposition_table(records: &[NullClassRecord]) -> String {
    let mut out = String::new();
    writeln!(out, "{:>3}  splittings", "a").unwrap();
    let mut degrees: Vec<i64> = records.iter().map(|r| r.representative.a()).collect();
    degrees.dedup();
    for a in degrees {
        let mut shapes: Vec<(TypePattern, TypePattern)> = records
            .iter()
            .filter(|r| r.representative.a() == a)
            .flat_map(NullClassRecord::decomposition_shapes)
            .collect();
        shapes.sort_by(|p, q| q.cmp(p));
        shapes.dedup();
        let cell = if shapes.is_empty() {
            let mut own: Vec<String> = records
                .iter()
                .filter(|r| r.representative.a() == a)
                .map(|r| r.representative.type_pattern().to_string())
                .collect();
            own.dedup();
            own.join(", ")
        } else {
            shapes
                .iter()
                .map(|(x, y)| format!("{x}+{y}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(out, "{a:>3}  {cell}").unwrap();
    }
    out
}

/// Everything printed by `delpezzo tables`.
pub fn all_tables() -> String {
    let rank = Rank::new(8).expect("8 is a valid rank");
    let records = enumerate_null_classes(&SurfaceContext::new(rank));
    format!(
        "{}\n{}\n{}",
        exceptional_census_table(),
        null_class_table(&records, rank),
        decomposition_table(&records)
    )
}
