#include "trackgraph/suffix.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "trackgraph/errors.hpp"

namespace trackgraph {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (start <= host.size()) {
        std::size_t dot = host.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(host.substr(start));
            break;
        }
        labels.push_back(host.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

std::string join_from(const std::vector<std::string_view>& labels, std::size_t i) {
    std::string out;
    for (std::size_t k = i; k < labels.size(); ++k) {
        if (k > i) out.push_back('.');
        out.append(labels[k]);
    }
    return out;
}

bool looks_like_ipv4(const std::vector<std::string_view>& labels) {
    if (labels.size() != 4) return false;
    for (auto l : labels) {
        if (l.empty() || l.size() > 3) return false;
        int v = 0;
        for (char c : l) {
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        if (v > 255) return false;
    }
    return true;
}

}  // namespace

SuffixRules::SuffixRules() = default;

void SuffixRules::add_rule(std::string_view rule) {
    std::string r = ascii_lower(rule);
    if (r.empty()) return;
    if (r == "*") return;  // root rule is implicit
    ++n_rules_;
    if (r[0] == '!') {
        exception_.insert(r.substr(1));
    } else if (r.rfind("*.", 0) == 0) {
        wildcard_.insert(r.substr(2));
    } else {
        exact_.insert(std::move(r));
    }
}

SuffixRules SuffixRules::from_lines(const std::vector<std::string>& lines) {
    SuffixRules rules;
    for (const auto& raw : lines) {
        std::string line = raw;
        if (auto cr = line.find('\r'); cr != std::string::npos) line.erase(cr);
        // rules end at the first whitespace, per the PSL format
        if (auto ws = line.find_first_of(" \t"); ws != std::string::npos) line.erase(ws);
        if (line.empty() || line.rfind("//", 0) == 0 || line[0] == '#') continue;
        rules.add_rule(line);
    }
    return rules;
}

SuffixRules SuffixRules::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open suffix rules file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return from_lines(lines);
}

std::string SuffixRules::public_suffix(std::string_view host_in) const {
    std::string host = ascii_lower(host_in);
    if (!host.empty() && host.back() == '.') host.pop_back();  // FQDN form
    if (host.empty()) throw ParseError("invalid hostname: empty");
    if (host.find(':') != std::string::npos)
        throw ParseError("unregistrable host (IP literal): " + std::string(host_in));

    auto labels = split_labels(host);
    for (auto l : labels)
        if (l.empty()) throw ParseError("invalid hostname: " + std::string(host_in));
    if (looks_like_ipv4(labels))
        throw ParseError("unregistrable host (IP literal): " + std::string(host_in));

    const std::size_t n = labels.size();

    // Exception rules prevail over everything; longest match first.
    if (!exception_.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (exception_.count(join_from(labels, i))) return join_from(labels, i + 1);
        }
    }
    // Otherwise the rule with the most labels wins; scanning suffixes from
    // the longest candidate down finds it first.
    for (std::size_t i = 0; i < n; ++i) {
        std::string cand = join_from(labels, i);
        if (exact_.count(cand)) return cand;
        if (i + 1 < n && wildcard_.count(join_from(labels, i + 1))) return cand;
    }
    // Root rule "*": the rightmost label is the suffix.
    return std::string(labels[n - 1]);
}

std::string SuffixRules::etld1(std::string_view host_in) const {
    std::string host = ascii_lower(host_in);
    if (!host.empty() && host.back() == '.') host.pop_back();
    std::string suffix = public_suffix(host);
    if (suffix.size() >= host.size())
        throw ParseError("unregistrable host (bare public suffix): " + std::string(host_in));
    // one label to the left of the suffix
    std::size_t cut = host.size() - suffix.size() - 1;  // index of '.' before suffix
    std::size_t prev = host.rfind('.', cut == 0 ? 0 : cut - 1);
    return prev == std::string::npos ? host : host.substr(prev + 1);
}

}  // namespace trackgraph
