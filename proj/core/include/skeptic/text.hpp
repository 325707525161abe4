#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace skeptic {

/// Approximate token count used by the data filters: ceil(bytes / 4).
/// A deliberate tokenizer-free heuristic; the thresholds that consume it are
/// configurable.
std::size_t approx_token_length(std::string_view text);

/// Longest run of consecutive backticks anywhere in `text` (0 if none).
std::size_t longest_backtick_run(std::string_view text);

/// Truncates `payload` to at most `cap` bytes, appending a marker when cut.
std::string truncate_payload(std::string_view payload, std::size_t cap);

struct FencedBlock {
  std::string info;  // text after the opening backticks, trimmed
  std::string body;  // lines between the fences, without a trailing newline
};

/// Extracts backtick-fenced blocks. A fence opens on a line starting with
/// three or more backticks and closes on a line consisting of at least as
/// many backticks. Unclosed fences run to the end of input.
std::vector<FencedBlock> extract_fenced_blocks(std::string_view text);

/// `text` with every fenced block (fences included) removed, outer
/// whitespace trimmed.
std::string strip_fenced_blocks(std::string_view text);

std::string trim(std::string_view text);

}  // namespace skeptic
