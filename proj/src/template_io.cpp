#include "fpmatch/template_io.hpp"

#include "fpmatch/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace fpmatch {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t')
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

// Non-comment, non-blank lines with their 1-based line numbers.
std::vector<Line> content_lines(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);
        if (raw.empty() || raw.front() != '#') {
            auto tokens = split_ws(raw);
            if (!tokens.empty())
                out.push_back({number, std::move(tokens)});
        }
        if (end == text.size())
            break;
        pos = end + 1;
    }
    return out;
}

[[noreturn]] void format_error(std::size_t line, const std::string& what)
{
    throw FormatError("line " + std::to_string(line) + ": " + what);
}

double to_real(std::string_view tok, std::size_t line)
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value))
        format_error(line, "non-numeric field '" + std::string(tok) + "'");
    return value;
}

long to_integer(std::string_view tok, std::size_t line)
{
    long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        format_error(line, "expected an integer, got '" + std::string(tok) + "'");
    return value;
}

}  // namespace

MinutiaTemplate parse_template(std::string_view text, std::string id)
{
    const auto lines = content_lines(text);
    if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "MNT" || lines[0].tokens[1] != "1")
        throw FormatError("missing 'MNT 1' header");
    if (lines.size() < 3)
        throw FormatError("truncated header");

    MinutiaTemplate t;
    t.id = std::move(id);

    const Line& box = lines[1];
    if (box.tokens.size() != 2)
        format_error(box.number, "expected '<width> <height>'");
    const long w = to_integer(box.tokens[0], box.number);
    const long h = to_integer(box.tokens[1], box.number);
    if (w <= 0 || h <= 0 || w > 1'000'000 || h > 1'000'000)
        format_error(box.number, "image size must be positive");
    t.width = static_cast<int>(w);
    t.height = static_cast<int>(h);

    const Line& cnt = lines[2];
    if (cnt.tokens.size() != 1)
        format_error(cnt.number, "expected '<count>'");
    const long count = to_integer(cnt.tokens[0], cnt.number);
    if (count < 0)
        format_error(cnt.number, "count must be non-negative");
    if (lines.size() - 3 != static_cast<std::size_t>(count))
        throw FormatError("expected " + std::to_string(count) + " records, found " +
                          std::to_string(lines.size() - 3));

    t.minutiae.reserve(static_cast<std::size_t>(count));
    for (std::size_t r = 3; r < lines.size(); ++r) {
        const Line& ln = lines[r];
        if (ln.tokens.size() != 5)
            format_error(ln.number, "expected 5 fields, found " + std::to_string(ln.tokens.size()));
        Minutia m;
        m.x = to_real(ln.tokens[0], ln.number);
        m.y = to_real(ln.tokens[1], ln.number);
        m.direction = to_real(ln.tokens[2], ln.number);
        if (ln.tokens[3] == "E")
            m.type = MinutiaType::Ending;
        else if (ln.tokens[3] == "B")
            m.type = MinutiaType::Bifurcation;
        else
            format_error(ln.number, "type must be E or B");
        m.quality = to_real(ln.tokens[4], ln.number);

        if (!(m.direction >= 0.0 && m.direction < 360.0))
            throw RangeError("line " + std::to_string(ln.number) + ": direction outside [0, 360)");
        if (!(m.quality >= 0.0 && m.quality <= 1.0))
            throw RangeError("line " + std::to_string(ln.number) + ": quality outside [0, 1]");
        if (m.x < 0.0 || m.y < 0.0 || m.x > t.width || m.y > t.height)
            throw RangeError("line " + std::to_string(ln.number) + ": position outside image box");
        t.minutiae.push_back(m);
    }
    return t;
}

std::string write_template(const MinutiaTemplate& t)
{
    std::string out = "MNT 1\n" + std::to_string(t.width) + " " + std::to_string(t.height) + "\n" +
                      std::to_string(t.minutiae.size()) + "\n";
    char buf[160];
    for (const auto& m : t.minutiae) {
        // Directions that would print as 360.000000 wrap to 0.
        const double dir = m.direction >= 359.9999995 ? 0.0 : m.direction;
        std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f %c %.6f\n", m.x, m.y, dir,
                      m.type == MinutiaType::Ending ? 'E' : 'B', m.quality);
        out += buf;
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failed for " + path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("write failed for " + path.string());
}

MinutiaTemplate load_template(const std::filesystem::path& path)
{
    try {
        return parse_template(read_text_file(path), path.stem().string());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const RangeError& e) {
        throw RangeError(path.string() + ": " + e.what());
    }
}

void save_template(const std::filesystem::path& path, const MinutiaTemplate& t)
{
    write_text_file(path, write_template(t));
}

DatasetManifest scan_dataset(const std::filesystem::path& root, std::string_view pattern)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw IoError("not a directory: " + root.string());

    const std::regex re{std::string(pattern)};
    std::map<std::pair<int, int>, fs::path> found;
    fs::directory_iterator it(root, ec);
    if (ec)
        throw IoError("cannot list " + root.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file(ec))
            continue;
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, re) || m.size() < 3)
            continue;
        int subject = 0;
        int impression = 0;
        const std::string s = m[1].str();
        const std::string i = m[2].str();
        if (std::from_chars(s.data(), s.data() + s.size(), subject).ec != std::errc{} ||
            std::from_chars(i.data(), i.data() + i.size(), impression).ec != std::errc{})
            continue;
        const auto [pos, inserted] = found.emplace(std::pair{subject, impression}, entry.path());
        if (!inserted)
            throw DuplicateEntry("subject " + s + " impression " + i + " appears as both " +
                                 pos->second.filename().string() + " and " + name);
    }

    DatasetManifest manifest;
    manifest.name = root.filename().empty() ? root.parent_path().filename().string() : root.filename().string();
    for (const auto& [key, path] : found)
        manifest.entries.push_back({key.first, key.second, path});
    return manifest;
}

}  // namespace fpmatch
