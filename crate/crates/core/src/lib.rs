pub mod check;
pub mod classify;
pub mod covering;
pub mod cubic;
pub mod gf;
pub mod incidence;
pub mod pg3;
pub mod verify;
