//! Non-resonant ample classes, the generic-section augmentation, order-one
//! certification of exceptional poles and the translate bookkeeping for
//! Bernstein-Sato zero loci.

mod augment;
mod avg;
mod bs;
mod certificate;
mod order_one;

pub use augment::{augment, AugmentedDatum, ChiSource};
pub use avg::{check_avg, make_avg, primes_above, AvgReport, AvgViolation, AvgWitness, MadeAvg};
pub use bs::{
    bs_translates, frak_l_checks, frak_l_membership, lemma_line, on_line, q_point, q_point_raw,
    translate, FrakLCheck, FrakLVector, HyperplaneSet,
};
pub use certificate::{
    cone_grid, sixone_example_cones, strong_mc_certificate, Certificate, ConeReport,
    DivisorCertificate, CONTINGENCY, FRAK_L_SEARCH_LIMIT,
};
pub use order_one::{
    certify_order_one, coincidences_at, pole_separation_threshold, residue_sum, section_lines,
    Coincidence, OrderOneEntry, OrderOneReport, SectionLine, Threshold,
};
