#include "omlog/corpus/corpus_io.hpp"

#include <fstream>
#include <string>

#include "omlog/corpus/drain.hpp"
#include "omlog/errors.hpp"

namespace omlog {

ParsedRecordWriter::ParsedRecordWriter(std::ostream& out) : out_(out) {
    out_ << "line_no\ttimestamp\tcomponent\tlevel\tevent_id\tparams\n";
}

void ParsedRecordWriter::write(const ParsedRecord& record, const StringInterner& components,
                               const StringInterner& levels) {
    out_ << record.line_no << '\t' << record.header.timestamp << '\t' << components.name(record.header.component)
         << '\t' << levels.name(record.header.level) << '\t' << record.event_id << '\t';
    for (std::size_t i = 0; i < record.params.size(); ++i) {
        if (i) out_ << kParamSeparator;
        out_ << record.params[i];
    }
    out_ << '\n';
}

void write_template_catalog(std::ostream& out, const EventVocabulary& vocabulary) {
    out << "event_id\ttemplate\n";
    for (const auto& e : vocabulary.events()) out << e.event_id << '\t' << e.text() << '\n';
}

EventVocabulary read_template_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open template catalog " + path.string());
    EventVocabulary vocab;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("malformed catalog row: " + line);
        const auto id = std::stoul(line.substr(0, tab));
        if (id != vocab.size()) throw DataError("catalog ids are not dense at " + line);
        std::vector<std::string> tokens;
        for (auto t : split_whitespace(std::string_view(line).substr(tab + 1))) tokens.emplace_back(t);
        vocab.add(std::move(tokens));
    }
    return vocab;
}

}  // namespace omlog
