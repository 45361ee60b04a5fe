//! Exact triadic geometry: Cantor intervals, gap intervals, the stages
//! `E_m`/`F_m`, their complements and the cross covering.

mod construction;
mod export;
mod interval;
mod region;
mod sequence;

pub use construction::{
    build_em, build_fm, complement_by_cross, complement_region, crosses, gap_intervals, total_length, Cross, Segment,
};
pub use export::{GeometryDocument, GeometryKind, RectJson, GEOMETRY_SCHEMA_VERSION};
pub use interval::{
    cantor_interval, cantor_intervals, containing_index, interval_center, GapInterval, TriadicInterval, MAX_LEVEL,
};
pub use region::{union_length, CanonicalRegion, Rect, RectRegion};
pub use sequence::DeltaSequence;
