//! Small instances shipped with the binary.

pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../fixtures/", $name, ".prof")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("slot_breakdown"),
    fixture!("distance_deadline"),
    fixture!("distance_release"),
    fixture!("late_tasks_deadline"),
    fixture!("late_tasks_release"),
    fixture!("emd_release"),
    fixture!("emd_deadline"),
    fixture!("late_tasks_inferred"),
    fixture!("distance_interval_unanimity"),
    fixture!("single_voter"),
];

impl Fixture {
    /// First comment line, if any.
    pub fn description(&self) -> &'static str {
        self.text
            .lines()
            .find_map(|l| l.trim().strip_prefix('#'))
            .map(str::trim)
            .unwrap_or("")
    }

    pub fn profile(&self) -> consched::PreferenceProfile {
        consched::parse_profile(self.text).expect("bundled fixtures parse")
    }
}

pub fn get(name: &str) -> Option<&'static Fixture> {
    let name = name.strip_suffix(".prof").unwrap_or(name);
    FIXTURES.iter().find(|f| f.name == name)
}

/// Parsed fixture by name.
///
/// # Panics
/// If no fixture has that name.
pub fn profile(name: &str) -> consched::PreferenceProfile {
    get(name)
        .unwrap_or_else(|| panic!("no fixture `{name}`"))
        .profile()
}
