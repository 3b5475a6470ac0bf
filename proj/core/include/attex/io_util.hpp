#pragma once

#include <string>
#include <vector>

namespace attex {

std::vector<std::string> read_lines(const std::string& path);
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);
bool file_exists(const std::string& path);

std::vector<std::string> split(const std::string& s, char sep);
std::vector<std::string> split_ws(const std::string& s);
std::string trim(const std::string& s);
std::string lower(const std::string& s);

}  // namespace attex
