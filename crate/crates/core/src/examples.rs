//! Bundled knowledge bases used by tests, the acceptance suite and the README.

use crate::kb::KnowledgeBase;

macro_rules! bundled {
    ($($(#[$doc:meta])* $name:ident => $file:literal;)*) => {
        $(
            $(#[$doc])*
            pub fn $name() -> KnowledgeBase {
                KnowledgeBase::parse(include_str!(concat!("../kbs/", $file)))
                    .expect(concat!("bundled ", $file, " parses"))
            }
        )*

        /// `(file name, text)` for every bundled knowledge base.
        pub const ALL: &[(&str, &str)] = &[
            $(($file, include_str!(concat!("../kbs/", $file))),)*
        ];
    };
}

bundled! {
    /// Students, taxes and youth; one exceptional subclass.
    students => "students.kb";
    /// Two conflicting superclasses with a shared bright-student default.
    bright_students => "bright_students.kb";
    /// Like `bright_students`, but the employee default bundles two properties.
    employed_students => "employed_students.kb";
    /// `employed_students` with the bundled employee default split in two.
    employed_students_split => "employed_students_split.kb";
    /// Weight of evidence: one default against two.
    swimmers => "swimmers.kb";
    /// Rational monotonicity counterexample for the multipreference closure.
    merry_students => "merry_students.kb";
    /// Redundant restatements of one default.
    redundant => "redundant.kb";
    /// Strict residence constraints with unranked defaults.
    residence => "residence.kb";
}
