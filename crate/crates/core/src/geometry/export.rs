use serde::{Deserialize, Serialize};

use super::construction::{build_em, build_fm, complement_region, crosses, Segment};
use super::region::{Rect, RectRegion};
use super::sequence::DeltaSequence;
use crate::error::{Error, Result};

pub const GEOMETRY_SCHEMA_VERSION: u32 = 1;

use crate::rational::{from_pair as unpair, to_pair as pair, Pair};

/// A rectangle as two exact coordinate intervals, each endpoint a
/// `[numerator, denominator]` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectJson {
    pub x: [Pair; 2],
    pub y: [Pair; 2],
}

impl From<&Rect> for RectJson {
    fn from(r: &Rect) -> Self {
        RectJson { x: [pair(r.x0()), pair(r.x1())], y: [pair(r.y0()), pair(r.y1())] }
    }
}

impl TryFrom<&RectJson> for Rect {
    type Error = Error;

    fn try_from(r: &RectJson) -> Result<Rect> {
        Rect::new(unpair(&r.x[0])?, unpair(&r.x[1])?, unpair(&r.y[0])?, unpair(&r.y[1])?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    /// `E_m` as closed intervals (in `segments`).
    Em,
    Fm,
    Complement,
    Crosses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossJson {
    pub level: u32,
    pub index: u64,
    pub horizontal: RectJson,
    pub vertical: RectJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDocument {
    pub schema_version: u32,
    pub kind: GeometryKind,
    pub depth: u32,
    pub sequence: DeltaSequence,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rectangles: Vec<RectJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<[Pair; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub crosses: Vec<CrossJson>,
}

impl GeometryDocument {
    pub fn build(kind: GeometryKind, seq: &DeltaSequence, depth: u32) -> Result<Self> {
        let mut doc = GeometryDocument {
            schema_version: GEOMETRY_SCHEMA_VERSION,
            kind,
            depth,
            sequence: seq.clone(),
            rectangles: Vec::new(),
            segments: Vec::new(),
            crosses: Vec::new(),
        };
        match kind {
            GeometryKind::Em => {
                doc.segments = build_em(seq, depth)?.iter().map(|(a, b)| [pair(a), pair(b)]).collect();
            }
            GeometryKind::Fm => doc.rectangles = rects_json(&build_fm(seq, depth)?),
            GeometryKind::Complement => doc.rectangles = rects_json(&complement_region(seq, depth)?),
            GeometryKind::Crosses => {
                doc.crosses = crosses(seq, depth)?
                    .iter()
                    .map(|c| CrossJson {
                        level: c.level(),
                        index: c.index(),
                        horizontal: c.horizontal_strip().into(),
                        vertical: c.vertical_strip().into(),
                    })
                    .collect();
            }
        }
        Ok(doc)
    }

    pub fn validate_schema(&self) -> Result<()> {
        if self.schema_version != GEOMETRY_SCHEMA_VERSION {
            return Err(Error::Schema(format!("unsupported geometry schema version {}", self.schema_version)));
        }
        Ok(())
    }

    pub fn region(&self) -> Result<RectRegion> {
        self.validate_schema()?;
        let mut rects: Vec<Rect> = self.rectangles.iter().map(Rect::try_from).collect::<Result<_>>()?;
        for c in &self.crosses {
            rects.push(Rect::try_from(&c.horizontal)?);
            rects.push(Rect::try_from(&c.vertical)?);
        }
        Ok(RectRegion::new(rects))
    }

    pub fn segments(&self) -> Result<Vec<Segment>> {
        self.segments.iter().map(|[a, b]| Ok((unpair(a)?, unpair(b)?))).collect()
    }
}

fn rects_json(region: &RectRegion) -> Vec<RectJson> {
    region.rects().iter().map(RectJson::from).collect()
}
