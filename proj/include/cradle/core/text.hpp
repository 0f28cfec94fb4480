#pragma once

#include <string>
#include <vector>

namespace cradle {

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::vector<std::string> split_lines(const std::string& s);
bool starts_with(const std::string& s, const std::string& prefix);

/// Splits on '.', '!' or '?' followed by whitespace (or end of text).
/// Terminators stay attached to their sentence.
std::vector<std::string> split_sentences(const std::string& text);

/// Keeps at most `max_sentences`, re-joined with single spaces.
std::string truncate_sentences(const std::string& text, int max_sentences);

/// Lower-case identifier from free text: alnum runs joined by '_'.
std::string slugify(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Escapes newlines/backslashes into a single line ("\n" / "\\").
std::string escape_line(const std::string& s);
std::string unescape_line(const std::string& s);

}  // namespace cradle
