#ifndef CIRCLELAB_IO_HPP
#define CIRCLELAB_IO_HPP

#include <map>
#include <string>
#include <vector>

namespace circlelab::io {

// RFC-4180 quoting; fields with commas, quotes or newlines are quoted
std::string csv_field(const std::string& s);

// shortest round-trip decimal for a double
std::string format_double(double v);

// CSV document with '#'-prefixed header lines carrying the resolved config.
struct CsvWriter {
    std::vector<std::string> header_comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void comment(const std::string& line) { header_comments.push_back(line); }
    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string str() const;
};

// temp file in the same directory + rename; never leaves a torn file
void atomic_write(const std::string& path, const std::string& contents);

// resolved config echoed into every output
std::string config_line(const std::map<std::string, std::string>& kv);

}

#endif
