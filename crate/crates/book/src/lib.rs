// The guide in book/ is plain mdbook, which cannot test Rust listings that
// depend on workspace crates. Each chapter is pulled in here as the docs of
// an empty module instead, so `cargo test` runs every listing as a doctest.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/pheromone.md")]
mod pheromone {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/discovery.md")]
mod discovery {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/simulator.md")]
mod simulator {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/scenarios.md")]
mod scenarios {}
