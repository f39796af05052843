#ifndef RTGMAP_TESTS_FIXTURES_HPP
#define RTGMAP_TESTS_FIXTURES_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "rtgmap/dtd.hpp"
#include "rtgmap/errors.hpp"
#include "rtgmap/grammar_text.hpp"
#include "rtgmap/mapping_text.hpp"
#include "rtgmap/xml_tree.hpp"

#ifndef RTGMAP_TEST_DATA_DIR
#define RTGMAP_TEST_DATA_DIR "tests/data"
#endif

namespace rtgmap::testsupport {

inline std::string data_path(const std::string& name) {
    return std::string(RTGMAP_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline Grammar load_grammar(const std::string& name) {
    return parse_grammar(read_file(data_path(name)));
}

inline Grammar load_dtd(const std::string& name) {
    return import_dtd(read_file(data_path(name)));
}

inline XmlTree load_xml(const std::string& name) {
    return parse_xml(read_file(data_path(name)));
}

inline MappingFile load_map(const std::string& name) {
    return parse_mapping_file(read_file(data_path(name)));
}

} // namespace rtgmap::testsupport

#endif
