#include "skeptic/text.hpp"

#include <algorithm>
#include <cctype>

namespace skeptic {

std::size_t approx_token_length(std::string_view text) {
  return (text.size() + 3) / 4;
}

std::size_t longest_backtick_run(std::string_view text) {
  std::size_t best = 0, run = 0;
  for (char c : text) {
    run = (c == '`') ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::string truncate_payload(std::string_view payload, std::size_t cap) {
  if (payload.size() <= cap) return std::string(payload);
  std::string out(payload.substr(0, cap));
  out += "\n[truncated]";
  return out;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

namespace {

struct Line {
  std::size_t begin;  // offset of first char
  std::size_t end;    // offset one past last char, excluding the newline
};

std::vector<Line> line_spans(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back({pos, text.size()});
      break;
    }
    lines.push_back({pos, nl});
    pos = nl + 1;
  }
  return lines;
}

std::size_t leading_backticks(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '`') ++n;
  return n;
}

bool is_closing_fence(std::string_view line, std::size_t open_len) {
  std::size_t n = leading_backticks(line);
  if (n < open_len) return false;
  for (std::size_t i = n; i < line.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(line[i]))) return false;
  }
  return true;
}

}  // namespace

std::vector<FencedBlock> extract_fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> blocks;
  auto lines = line_spans(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view line = text.substr(lines[i].begin, lines[i].end - lines[i].begin);
    std::size_t open_len = leading_backticks(line);
    if (open_len < 3) {
      ++i;
      continue;
    }
    FencedBlock block;
    block.info = trim(line.substr(open_len));
    std::size_t j = i + 1;
    std::string body;
    for (; j < lines.size(); ++j) {
      std::string_view inner = text.substr(lines[j].begin, lines[j].end - lines[j].begin);
      if (is_closing_fence(inner, open_len)) break;
      if (!body.empty()) body += '\n';
      body.append(inner);
    }
    block.body = std::move(body);
    blocks.push_back(std::move(block));
    i = (j < lines.size()) ? j + 1 : j;
  }
  return blocks;
}

std::string strip_fenced_blocks(std::string_view text) {
  std::string out;
  auto lines = line_spans(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view line = text.substr(lines[i].begin, lines[i].end - lines[i].begin);
    std::size_t open_len = leading_backticks(line);
    if (open_len >= 3) {
      std::size_t j = i + 1;
      for (; j < lines.size(); ++j) {
        std::string_view inner = text.substr(lines[j].begin, lines[j].end - lines[j].begin);
        if (is_closing_fence(inner, open_len)) break;
      }
      i = (j < lines.size()) ? j + 1 : j;
      continue;
    }
    out.append(line);
    out += '\n';
    ++i;
  }
  return trim(out);
}

}  // namespace skeptic
