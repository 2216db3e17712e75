//! Serialized constructions, shared by the command-line tool and the C ABI.

use std::sync::Arc;

use serde::Serialize;

use crate::elmendorf_cat::c_cat;
use crate::elmendorf_pos::{c_pos, milnor, posetal_quotient};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::orbit::{MarkedOrbitCategory, OrbitCategory};
use crate::simplicial::{hocolim_diag, nerve_g};
use crate::verify::parse_presheaf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Artifact {
    OrbitCat,
    MarkedOrbitCat,
    CCat,
    CPos,
    Milnor,
    Quotient,
    Nerve,
    Hocolim,
}

impl Artifact {
    pub const ALL: [Artifact; 8] = [
        Artifact::OrbitCat,
        Artifact::MarkedOrbitCat,
        Artifact::CCat,
        Artifact::CPos,
        Artifact::Milnor,
        Artifact::Quotient,
        Artifact::Nerve,
        Artifact::Hocolim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Artifact::OrbitCat => "orbit-cat",
            Artifact::MarkedOrbitCat => "marked-orbit-cat",
            Artifact::CCat => "c-cat",
            Artifact::CPos => "c-pos",
            Artifact::Milnor => "milnor",
            Artifact::Quotient => "quotient",
            Artifact::Nerve => "nerve",
            Artifact::Hocolim => "hocolim",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Artifact::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown artifact {s:?}")))
    }
}

/// Inputs for [`build`]; the presheaf defaults to `family:e`.
#[derive(Debug, Clone)]
pub struct BuildArgs {
    pub group: Arc<FiniteGroup>,
    pub presheaf: Option<String>,
    pub depth: usize,
    pub dim: usize,
}

pub fn build(what: Artifact, args: &BuildArgs) -> Result<serde_json::Value> {
    let orbit = Arc::new(OrbitCategory::new(args.group.clone())?);
    let presheaf = || parse_presheaf(&orbit, args.presheaf.as_deref().unwrap_or("family:e"));
    Ok(match what {
        Artifact::OrbitCat => orbit.to_json(true),
        Artifact::MarkedOrbitCat => MarkedOrbitCategory::new(orbit.clone())?.to_json(),
        Artifact::CCat => c_cat(&presheaf()?)?.to_json(),
        Artifact::CPos => c_pos(&presheaf()?, args.depth)?.composite.poset.to_json(),
        Artifact::Milnor => milnor(&c_cat(&presheaf()?)?.to_preorder()?, args.depth)?.poset.to_json(),
        Artifact::Quotient => {
            let q = posetal_quotient(&c_cat(&presheaf()?)?.to_preorder()?);
            serde_json::json!({
                "source": q.source.to_json(),
                "quotient": q.quotient.to_json(),
                "projection": q.proj,
                "section": q.section,
            })
        }
        Artifact::Nerve => nerve_g(c_cat(&presheaf()?)?.gcategory(), args.dim)?.to_json(),
        Artifact::Hocolim => {
            let marked = MarkedOrbitCategory::new(orbit.clone())?;
            hocolim_diag(&presheaf()?, &marked, args.dim)?.to_json()
        }
    })
}

/// The JSON body reported for an error.
pub fn error_json(e: &Error) -> serde_json::Value {
    let kind = match e {
        Error::Invalid(_) => "invalid-input",
        Error::SizeGuard { .. } => "size-guard",
        Error::Verification(_) => "verification-failure",
    };
    serde_json::json!({ "error": { "kind": kind, "message": e.to_string(), "exit_code": e.exit_code() } })
}
