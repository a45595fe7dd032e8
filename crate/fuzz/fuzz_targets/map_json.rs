#![no_main]

use libfuzzer_sys::fuzz_target;
use tango::mapping::MapFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = MapFile::parse(text) else { return };
    let width = file.initial.iter().chain(&file.final_).copied().max().map_or(0, |m| m + 1);
    if width > 1 << 16 {
        return;
    }
    if let Ok((initial, final_)) = file.mappings(width) {
        assert_eq!(initial.layout(), file.initial);
        assert_eq!(final_.layout(), file.final_);
    }
});
