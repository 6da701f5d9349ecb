//! File formats, a timed parallel search driver and the `ccode` command-line
//! tool, layered over [`ccode_core`].

pub mod cli;
pub mod codefile;
pub mod report;
pub mod stripefile;

pub use codefile::{parse_code_file, parse_code_file_with, write_code_file, Checks, CodeFileError};
pub use report::SearchReport;
pub use stripefile::{read_stripe, write_stripe, StripeFileError};
