//! Per-degree summaries of a relation ideal.

use serde::Serialize;

use crate::charclass::RingParams;
use crate::kappa_poly::{span_in_degree, BasisScope, KappaPolynomial};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub degree: u32,
    /// Dimension of the kappa space in this degree.
    pub dimension: usize,
    /// Rank of the relation span.
    pub rank: usize,
    pub quotient: usize,
}

/// One row per degree in `lo..=hi` whose kappa space (in `scope`) is
/// nonzero. Rows for empty degrees are omitted so that tables for
/// different `d` line up after rescaling degrees by `d`.
pub fn relation_table(
    params: &RingParams,
    generators: &[KappaPolynomial<Q>],
    lo: u32,
    hi: u32,
    scope: BasisScope,
) -> Vec<TableRow> {
    (lo..=hi)
        .filter(|deg| deg % 2 == 0)
        .filter_map(|degree| {
            let span = span_in_degree(params, generators, degree, scope);
            (span.dimension() > 0).then(|| TableRow {
                degree,
                dimension: span.dimension(),
                rank: span.rank(),
                quotient: span.quotient_dimension(),
            })
        })
        .collect()
}

pub fn to_latex(rows: &[TableRow]) -> String {
    let mut out = String::from("\\begin{tabular}{rrrr}\n");
    out.push_str("degree & $\\dim$ & relations & quotient \\\\\n\\hline\n");
    for r in rows {
        out.push_str(&format!(
            "{} & {} & {} & {} \\\\\n",
            r.degree, r.dimension, r.rank, r.quotient
        ));
    }
    out.push_str("\\end{tabular}\n");
    out
}
