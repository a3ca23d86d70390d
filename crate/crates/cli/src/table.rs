//! Plain-text table rendering for designs, alias enumerations (grouped the
//! way the reference alias tables are, by degree offset and window-class
//! pattern), and folding matrices.

use std::collections::BTreeMap;

use hyperharm::aliasing::{offset_classes, AliasRecord, WindowClass};
use hyperharm::harmonics::HarmonicIndex;
use hyperharm::spectrum::{FoldingMatrix, PowerSpectrum};
use hyperharm::Design64;

/// Human-readable design summary.
pub fn design_summary(design: &Design64) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "d = {}, Q = {:?}, M = {}, N = {}\n",
        design.dim(),
        design.polar_counts(),
        design.azimuth_half_count(),
        design.node_count()
    ));
    for (j, coord) in (1..=design.dim() - 1).zip(design.polar()) {
        out.push_str(&format!("theta^({j}):"));
        for angle in &coord.theta {
            out.push_str(&format!(" {angle:.12}"));
        }
        out.push('\n');
        out.push_str(&format!("w^({j})    :"));
        for weight in &coord.weight {
            out.push_str(&format!(" {weight:.12}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "phi: {} angles, weight {:.12}\n",
        2 * design.azimuth_half_count(),
        design.phi_weight()
    ));
    out
}

/// Class-pattern label, e.g. `B_0,A_1`.
fn pattern_label(classes: &[WindowClass]) -> String {
    classes
        .iter()
        .enumerate()
        .map(|(level, class)| format!("{class}_{level}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Alias table grouped by `s_0` rows and window-class columns, mirroring the
/// grouped reference tables.
pub fn alias_table(
    source: &HarmonicIndex,
    q: &[usize],
    s0_max: i64,
    records: &[AliasRecord<f64>],
) -> String {
    // (s0 -> pattern -> entries)
    let mut rows: BTreeMap<i64, BTreeMap<Vec<WindowClass>, Vec<String>>> = BTreeMap::new();
    for s0 in -(source.ell() / 2)..=s0_max {
        rows.entry(s0).or_default();
    }
    let mut patterns: Vec<Vec<WindowClass>> = Vec::new();
    for record in records {
        let classes = offset_classes(source, record.s0, &record.s, q);
        if !patterns.contains(&classes) {
            patterns.push(classes.clone());
        }
        rows.entry(record.s0)
            .or_default()
            .entry(classes)
            .or_default()
            .push(record.target.to_string());
    }
    patterns.sort();

    let mut out = format!("aliases of {source} (s0 <= {s0_max})\n");
    let mut header = vec!["s0".to_string()];
    header.extend(patterns.iter().map(|p| pattern_label(p)));
    out.push_str(&header.join(" | "));
    out.push('\n');
    for (s0, by_pattern) in rows {
        let mut cells = vec![s0.to_string()];
        for pattern in &patterns {
            let cell = by_pattern
                .get(pattern)
                .map(|entries| entries.join(", "))
                .unwrap_or_default();
            cells.push(cell);
        }
        out.push_str(&cells.join(" | "));
        out.push('\n');
    }
    out
}

/// Folding-matrix rows as `ell -> target: lambda` lists.
pub fn folding_table(matrix: &FoldingMatrix<f64>, folded: Option<&PowerSpectrum<f64>>) -> String {
    let mut out = format!("folding matrix (ell <= {}, s0 <= {})\n", matrix.ell_max, matrix.s0_max);
    for row in &matrix.rows {
        out.push_str(&format!("ell = {}:", row.ell));
        for &(_, target, lambda) in &row.entries {
            if lambda != 0.0 {
                out.push_str(&format!(" {target}:{lambda:.6e}"));
            }
        }
        out.push('\n');
    }
    if let Some(spectrum) = folded {
        out.push_str("folded spectrum:");
        for (ell, value) in spectrum.values().iter().enumerate() {
            out.push_str(&format!(" {ell}:{value:.6e}"));
        }
        out.push('\n');
    }
    out
}
