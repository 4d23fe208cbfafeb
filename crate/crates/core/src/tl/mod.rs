//! Temperley–Lieb diagrams, their algebra, and Jones–Wenzl projectors.

mod diagram;
mod element;
mod jones_wenzl;

pub use diagram::TLDiagram;
pub use element::TLElement;
pub use jones_wenzl::jones_wenzl;
pub(crate) use jones_wenzl::projector;

use crate::arith::QFrac;
use crate::error::Result;

/// `x · y`, with `x` stacked on top of `y`.
pub fn tl_compose(x: &TLElement, y: &TLElement) -> Result<TLElement> {
    x.compose(y)
}

pub fn tl_trace(x: &TLElement) -> QFrac {
    x.trace()
}
