//! Machine-readable report schema and the text renderers.
//!
//! Torsion coefficients and matrix entries are encoded as decimal strings
//! so arbitrary-precision values survive JSON exactly; ranks and counts
//! are plain integers. The structs deserialize under `deny_unknown_fields`,
//! so emitted documents re-parse against the published schema.

use serde::{Deserialize, Serialize};

use flipk::verify::CheckReport;
use flipk::{Block, BlockContribution, FgAbGroup, FlipReport, GroupMap, IntMatrix, KData};

pub const REPORT_SCHEMA: &str = "flipk.report/v1";
pub const BLOCKS_SCHEMA: &str = "flipk.blocks/v1";
pub const KDATA_SCHEMA: &str = "flipk.kdata/v1";
pub const SELFCHECK_SCHEMA: &str = "flipk.selfcheck/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupOut {
    pub rank: u64,
    pub torsion: Vec<String>,
}

impl From<&FgAbGroup> for GroupOut {
    fn from(g: &FgAbGroup) -> Self {
        GroupOut {
            rank: g.rank() as u64,
            torsion: g.torsion().iter().map(|t| t.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KDataOut {
    pub k0: GroupOut,
    pub k1: GroupOut,
}

impl From<&KData> for KDataOut {
    fn from(k: &KData) -> Self {
        KDataOut {
            k0: (&k.k0).into(),
            k1: (&k.k1).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixOut {
    pub rows: u64,
    pub cols: u64,
    pub entries: Vec<Vec<String>>,
}

impl From<&IntMatrix> for MatrixOut {
    fn from(m: &IntMatrix) -> Self {
        MatrixOut {
            rows: m.rows() as u64,
            cols: m.cols() as u64,
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionPairOut {
    pub k0: MatrixOut,
    pub k1: MatrixOut,
}

fn action_pair(actions: &[GroupMap; 2]) -> ActionPairOut {
    ActionPairOut {
        k0: actions[0].matrix().into(),
        k1: actions[1].matrix().into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockOut {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    pub algebra: String,
}

impl From<&Block> for BlockOut {
    fn from(b: &Block) -> Self {
        BlockOut {
            kind: b.kind().to_owned(),
            n: b.parameter().map(|n| n.to_string()),
            algebra: b.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsOut {
    pub k0: Vec<String>,
    pub k1: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContributionOut {
    pub label: String,
    pub kdata: KDataOut,
    pub generators: GeneratorsOut,
    pub dual_action: ActionPairOut,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&BlockContribution> for ContributionOut {
    fn from(c: &BlockContribution) -> Self {
        ContributionOut {
            label: c.label.clone(),
            kdata: (&c.kdata).into(),
            generators: GeneratorsOut {
                k0: c.generators[0].clone(),
                k1: c.generators[1].clone(),
            },
            dual_action: action_pair(&c.dual_action),
            source: c.source.to_string(),
            note: c.note.map(str::to_owned),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportOut {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub input: KDataOut,
    pub blocks: Vec<BlockOut>,
    pub contributions: Vec<ContributionOut>,
    pub total: KDataOut,
    pub total_dual_action: ActionPairOut,
    pub disclaimer: String,
}

impl ReportOut {
    pub fn new(report: &FlipReport, name: Option<&str>) -> Self {
        ReportOut {
            schema: REPORT_SCHEMA.to_owned(),
            name: name.map(str::to_owned),
            input: (&report.input).into(),
            blocks: report.blocks.iter().map(Into::into).collect(),
            contributions: report.contributions.iter().map(Into::into).collect(),
            total: (&report.total).into(),
            total_dual_action: action_pair(&report.total_dual_action),
            disclaimer: report.disclaimer.to_owned(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksOut {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub blocks: Vec<BlockOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KDataDocOut {
    pub schema: String,
    pub k0: GroupOut,
    pub k1: GroupOut,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureOut {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOut {
    pub name: String,
    pub cases_run: u64,
    pub failures: Vec<FailureOut>,
}

impl From<&CheckReport> for CheckOut {
    fn from(c: &CheckReport) -> Self {
        CheckOut {
            name: c.name.clone(),
            cases_run: c.cases_run as u64,
            failures: c
                .failures
                .iter()
                .map(|f| FailureOut {
                    input: f.input.clone(),
                    expected: f.expected.clone(),
                    actual: f.actual.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfcheckOut {
    pub schema: String,
    pub max_n: u64,
    pub seed: u64,
    pub checks: Vec<CheckOut>,
    pub passed: bool,
}

/// Note shown when the block list is empty.
pub const KK_TRIVIAL_NOTE: &str = "KK-trivial; crossed product K-theory trivial";

pub fn render_report_text(report: &FlipReport, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("name: {name}\n"));
    }
    out.push_str(&format!("input K0 = {}\n", report.input.k0));
    out.push_str(&format!("input K1 = {}\n", report.input.k1));
    if report.blocks.is_empty() {
        out.push_str(&format!("blocks: (none)\nnote: {KK_TRIVIAL_NOTE}\n"));
    } else {
        let names: Vec<String> = report.blocks.iter().map(ToString::to_string).collect();
        out.push_str(&format!("blocks: {}\n", names.join(", ")));
    }
    for c in &report.contributions {
        out.push_str(&format!("summand {} [action source: {}]\n", c.label, c.source));
        for d in 0..2 {
            let group = c.kdata.degree(d);
            if group.is_trivial() {
                continue;
            }
            out.push_str(&format!("  K{d} = {group}"));
            if !c.generators[d].is_empty() {
                out.push_str(&format!(", generators {}", c.generators[d].join(", ")));
            }
            out.push('\n');
            out.push_str(&format!(
                "  dual action on K{d}: {}\n",
                c.dual_action[d].matrix()
            ));
        }
        if let Some(note) = c.note {
            out.push_str(&format!("  note: {note}\n"));
        }
    }
    out.push_str(&format!("total K0 = {}\n", report.total.k0));
    out.push_str(&format!("total K1 = {}\n", report.total.k1));
    out.push_str(&format!(
        "dual action on total K0: {}\n",
        report.total_dual_action[0].matrix()
    ));
    out.push_str(&format!(
        "dual action on total K1: {}\n",
        report.total_dual_action[1].matrix()
    ));
    out.push_str(&format!("hypotheses: {}\n", report.disclaimer));
    out
}

fn kind_label(b: &Block) -> String {
    match b {
        Block::Point => "Point".into(),
        Block::Cuntz(n) => format!("Cuntz({n})"),
        Block::Susp => "Susp".into(),
        Block::Drop(n) => format!("Drop({n})"),
    }
}

pub fn render_blocks_text(blocks: &[Block], name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str(&format!("name: {name}\n"));
    }
    if blocks.is_empty() {
        out.push_str(&format!("blocks: (none)\nnote: {KK_TRIVIAL_NOTE}\n"));
    } else {
        let parts: Vec<String> = blocks
            .iter()
            .map(|b| format!("{} [{}]", kind_label(b), b))
            .collect();
        out.push_str(&format!("blocks: {}\n", parts.join(", ")));
    }
    out
}

pub fn render_kdata_text(k: &KData) -> String {
    format!("K0 = {}\nK1 = {}\n", k.k0, k.k1)
}

pub fn render_check_text(check: &CheckReport) -> String {
    let mut out = format!(
        "check: {} .. {} cases, {} failures\n",
        check.name,
        check.cases_run,
        check.failures.len()
    );
    for f in &check.failures {
        out.push_str(&format!(
            "  FAIL input = {}; expected = {}; actual = {}\n",
            f.input, f.expected, f.actual
        ));
    }
    out
}
