//! Right-angled Coxeter word calculus, explicit semiregular right-angled
//! buildings, city products with their skeletal buildings, and universal
//! groups checked on finite balls.

pub mod building;
pub mod cityproduct;
pub mod diagram;
pub mod error;
pub mod export;
pub mod parkour;
pub mod perm;
pub mod report;
pub mod universal;
pub mod verify;
pub mod wordcalc;

pub use diagram::{
    city_product_diagrams, decompose_as_city_product, diagram_symmetries, find_module, CityDecomposition, Diagram,
    DiagramSymmetry, IndexPartition, Label,
};
pub use error::{Error, Result};
pub use wordcalc::{NormalForm, Tristate, Word};
pub use building::{BallView, BuildingModel, Chamber, PanelRef, PartialAut};
pub use cityproduct::{CityProduct, ProductSpec, SkeletalView};
pub use perm::{Perm, PermGroup};
