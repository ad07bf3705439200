#pragma once

#include <string>

namespace newsdesk {

// Canonical composition of combining diacritics for common Latin sequences.
// Covers the precomposed Latin-1 Supplement / Latin Extended-A range; other
// codepoints pass through unchanged.
std::string nfc_compose(const std::string& utf8);

// Stable content hash over title || 0x1F || description || 0x1F || outlet_id,
// each NFC-composed first. Used for duplicate detection.
std::string compute_dedup_hash(const std::string& title,
                               const std::string& description,
                               const std::string& outlet_id);

}  // namespace newsdesk
