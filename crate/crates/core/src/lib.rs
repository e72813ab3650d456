pub mod domain;
pub mod holder;
pub mod newton;
pub mod normal_form;
pub mod poly;
pub mod report;
pub mod slice;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/special_coordinates.md")]
    mod special_coordinates {}
    #[doc = include_str!("../../../book/src/newton_diagram.md")]
    mod newton_diagram {}
    #[doc = include_str!("../../../book/src/slices.md")]
    mod slices {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/holder.md")]
    mod holder {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
}
