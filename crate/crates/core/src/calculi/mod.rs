//! The built-in calculi: PA, IA, RCC5, RCC8 and the products CRA and RA.
//!
//! Each constructor is pure; the accessor functions ([`pa`], [`ia`], ...)
//! build once and hand out shared handles.

mod convex;
mod ia;
mod pa;
mod product;
mod rcc;

use std::sync::{Arc, OnceLock};

use crate::calculus::Calculus;
use crate::error::{Error, Result};

pub use convex::{convex_hull, convex_relations, dimension, is_preconvex};
pub use ia::{
    build_ia, classify_intervals, ia_endpoint_relations, ia_atom_composition_oracle, ia_composition_by_enumeration,
    IA_ATOMS,
};
pub use pa::{build_pa, classify_points, pa_atom_composition_oracle, PA_ATOMS};
pub use product::{
    product, product_atom, product_relation, project_relation, rectangle_composition_oracle,
    split_atom,
};
pub use rcc::{build_rcc5, build_rcc8, RCC5_ATOMS, RCC8_ATOMS};

/// Names accepted by [`by_name`].
pub const BUILTIN_NAMES: [&str; 6] = ["PA", "IA", "RCC5", "RCC8", "CRA", "RA"];

macro_rules! cached {
    ($fn_name:ident, $build:expr) => {
        pub fn $fn_name() -> Arc<Calculus> {
            static CELL: OnceLock<Arc<Calculus>> = OnceLock::new();
            CELL.get_or_init(|| Arc::new($build)).clone()
        }
    };
}

cached!(pa, build_pa());
cached!(ia, build_ia());
cached!(rcc8, build_rcc8());
cached!(rcc5, build_rcc5(&rcc8()).expect("RCC5 projection of the RCC8 table"));
cached!(cra, build_cra());
cached!(ra, product(&ia(), &ia(), "RA"));

fn build_cra() -> Calculus {
    let pa = pa();
    let mut c = product(&pa, &pa, "CRA");
    // x-axis first, y-axis second: NW is x < x', y > y'.
    let aliases = [
        ("NW", "<", ">"),
        ("N", "=", ">"),
        ("NE", ">", ">"),
        ("W", "<", "="),
        ("EQ", "=", "="),
        ("E", ">", "="),
        ("SW", "<", "<"),
        ("S", "=", "<"),
        ("SE", ">", "<"),
    ];
    for (alias, x, y) in aliases {
        let a = c.atom(&format!("{x}*{y}")).expect("CRA atom");
        c = c.with_alias(alias, a);
    }
    c
}

/// Looks up a built-in calculus, case-insensitively.
pub fn by_name(name: &str) -> Result<Arc<Calculus>> {
    match name.trim().to_ascii_uppercase().as_str() {
        "PA" => Ok(pa()),
        "IA" => Ok(ia()),
        "RCC5" => Ok(rcc5()),
        "RCC8" => Ok(rcc8()),
        "CRA" => Ok(cra()),
        "RA" => Ok(ra()),
        _ => Err(Error::UnknownCalculus(name.to_string())),
    }
}
