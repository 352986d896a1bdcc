use std::fmt::Write as _;

use ozawa_core::folner::FolnerProvider;
use ozawa_core::{Element, Group};
use serde::Serialize;

use crate::config::{LevelRange, OutputFormat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallRow {
    pub radius: usize,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sphere: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallTable {
    pub group: String,
    pub rows: Vec<BallRow>,
}

impl BallTable {
    /// `|ball(k)|` for `k ≤ radius`, with the sphere at each radius if asked.
    pub fn build(group: &Group, radius: usize, elements: bool) -> ozawa_core::Result<Self> {
        let sizes = group.ball_sizes(radius)?;
        let mut rows = Vec::with_capacity(sizes.len());
        for (k, size) in sizes.into_iter().enumerate() {
            let sphere = if elements {
                Some(group.sphere(k)?.iter().map(ToString::to_string).collect())
            } else {
                None
            };
            rows.push(BallRow { radius: k, size, sphere });
        }
        Ok(BallTable {
            group: group.kind().to_string(),
            rows,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => {
                let with_elements = self.rows.iter().any(|r| r.sphere.is_some());
                let mut out = String::from(if with_elements { "radius,size,sphere\n" } else { "radius,size\n" });
                for row in &self.rows {
                    write!(out, "{},{}", row.radius, row.size).unwrap();
                    if let Some(sphere) = &row.sphere {
                        write!(out, ",\"{}\"", sphere.join(" ")).unwrap();
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectRow {
    pub n: usize,
    pub folner_size: usize,
    pub intersection: usize,
    pub symmetric_difference: usize,
    /// `symmetric_difference/folner_size`, unreduced.
    pub defect_counts: String,
    /// The same ratio in lowest terms.
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectCurve {
    pub group: String,
    pub provider: String,
    pub g: String,
    pub folner: bool,
    pub rows: Vec<DefectRow>,
}

impl DefectCurve {
    pub fn build(provider: &FolnerProvider<'_>, g: &Element, levels: LevelRange) -> ozawa_core::Result<Self> {
        let mut rows = Vec::new();
        for n in levels.levels() {
            let stats = provider.level(n)?.translate_stats(g)?;
            rows.push(DefectRow {
                n,
                folner_size: stats.size,
                intersection: stats.intersection,
                symmetric_difference: stats.symmetric_difference,
                defect_counts: format!("{}/{}", stats.symmetric_difference, stats.size),
                defect: stats.defect().to_string(),
            });
        }
        Ok(DefectCurve {
            group: provider.group().kind().to_string(),
            provider: provider.strategy().to_string(),
            g: g.to_string(),
            folner: provider.is_folner(),
            rows,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => {
                let mut out = String::from("n,folner_size,intersection,symmetric_difference,defect_counts,defect\n");
                for r in &self.rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.n, r.folner_size, r.intersection, r.symmetric_difference, r.defect_counts, r.defect
                    )
                    .unwrap();
                }
                out
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("table rows are plain data");
    s.push('\n');
    s
}
