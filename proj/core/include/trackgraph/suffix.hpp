#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace trackgraph {

// Public-suffix rule table in the publicsuffix.org text format.
// Registrable-domain ("eTLD+1") resolution is the identity granularity for
// publishers and trackers everywhere in this library, so that e.g.
// subdomain1.domain.com and subdomain2.domain.com collapse onto domain.com.
//
// The table always contains the root rule "*": every well-formed hostname
// resolves to some public suffix, and a hostname equal to its own suffix is
// rejected as unregistrable.
class SuffixRules {
public:
    SuffixRules();  // root rule only

    // Text format: one rule per line, "//" comments, optional "*." and "!"
    // markers. Unicode rules are kept as raw bytes; hostnames are expected
    // in their ASCII (punycode) form.
    static SuffixRules from_file(const std::filesystem::path& path);
    static SuffixRules from_lines(const std::vector<std::string>& lines);

    void add_rule(std::string_view rule);
    std::size_t rule_count() const { return n_rules_; }

    // Public suffix of host under the loaded rules.
    std::string public_suffix(std::string_view host) const;

    // Registrable domain: public suffix plus one label. Idempotent, and the
    // result is always a suffix of the input. Throws ParseError for hosts
    // that are bare public suffixes, IP literals, or malformed.
    std::string etld1(std::string_view host) const;

private:
    std::unordered_set<std::string> exact_;
    std::unordered_set<std::string> wildcard_;   // rule minus the "*." prefix
    std::unordered_set<std::string> exception_;  // rule minus the "!" prefix
    std::size_t n_rules_ = 0;
};

}  // namespace trackgraph
