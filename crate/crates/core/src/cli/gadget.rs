use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactmath::format_rational;
use crate::gadgets::{build_d, build_g, build_h, build_phi, matrix_m};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum GadgetKind {
    /// Stable-set gadget graph H_n.
    #[value(name = "H")]
    H,
    /// Hamiltonian-cycle digraph D_n.
    #[value(name = "D")]
    D,
    /// Undirected graph G_n obtained from D_n.
    #[value(name = "G")]
    G,
    /// 3-CNF formula phi_n.
    #[value(name = "phi")]
    Phi,
    /// The matrix M(n).
    #[value(name = "M")]
    M,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Dimacs,
}

fn unsupported(kind: GadgetKind, format: Format) -> Error {
    Error::input(format!("{kind:?} cannot be written as {format:?}"))
}

/// Deterministic export of a gadget.
pub fn cmd_gadget(kind: GadgetKind, n: usize, format: Format) -> Result<String> {
    match kind {
        GadgetKind::H => {
            let h = build_h(n)?;
            match format {
                Format::Dot => Ok(h.to_dot(&format!("H{n}"))),
                Format::Json => Ok(h.to_json()),
                _ => Err(unsupported(kind, format)),
            }
        }
        GadgetKind::D | GadgetKind::G => {
            let d = build_d(n)?;
            if kind == GadgetKind::D {
                match format {
                    Format::Dot => Ok(d.digraph.to_dot(&format!("D{n}"))),
                    Format::Json => Ok(d.digraph.to_json()),
                    _ => Err(unsupported(kind, format)),
                }
            } else {
                let g = build_g(&d.digraph)?;
                match format {
                    Format::Dot => Ok(g.to_dot(&format!("G{n}"))),
                    Format::Json => Ok(g.to_json()),
                    _ => Err(unsupported(kind, format)),
                }
            }
        }
        GadgetKind::Phi => {
            let phi = build_phi(n)?;
            match format {
                Format::Dimacs => Ok(phi.to_dimacs()),
                Format::Json => {
                    let clauses: Vec<Vec<i64>> = phi
                        .clauses()
                        .iter()
                        .map(|c| {
                            c.iter()
                                .map(|l| if l.negated { -(l.var as i64 + 1) } else { l.var as i64 + 1 })
                                .collect()
                        })
                        .collect();
                    Ok(json!({ "variables": phi.var_labels(), "clauses": clauses }).to_string())
                }
                _ => Err(unsupported(kind, format)),
            }
        }
        GadgetKind::M => {
            let m = matrix_m(n)?;
            let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect();
            match format {
                // entries of M(n) are integers
                Format::Json => Ok(format!(
                    "[{}]",
                    rows.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(",")
                )),
                Format::Csv => Ok(rows.iter().map(|r| r.join(",") + "\n").collect()),
                _ => Err(unsupported(kind, format)),
            }
        }
    }
}
