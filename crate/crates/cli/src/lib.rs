//! Support code for the `ellipsoid` command-line tool: JSON reports and
//! eccentricity scans.

pub mod report;
pub mod scan;
