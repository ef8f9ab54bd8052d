#include <stdio.h>
#include <string.h>

#include "splitter.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
                    splitter_last_error());                          \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    SplitterGraph *g = NULL;
    CHECK(splitter_graph_from_edge_list("3 3\n0 1\n1 2\n0 2\n", &g) == SPLITTER_STATUS_OK);
    CHECK(splitter_graph_vertex_count(g) == 3);

    SplitterEngine *e = NULL;
    SplitterEngineOptions opts = splitter_engine_options_default();
    CHECK(splitter_engine_new(g, 1, &opts, &e) == SPLITTER_STATUS_OK);
    size_t rank = 0;
    CHECK(splitter_engine_rank(e, &rank) == SPLITTER_STATUS_OK);
    CHECK(rank == 3);

    char *json = NULL;
    CHECK(splitter_engine_witness_json(e, &json) == SPLITTER_STATUS_OK);
    CHECK(strstr(json, "\"h\":[0,1,2]") != NULL);
    splitter_string_free(json);

    SplitterGraph *bad = NULL;
    CHECK(splitter_graph_from_edge_list("3 1\n0 0\n", &bad) == SPLITTER_STATUS_PARSE_ERROR);
    CHECK(strcmp(splitter_last_error(), "line 2: self-loop at vertex 0") == 0);

    SplitterGame *game = NULL;
    CHECK(splitter_game_new(g, 1, SPLITTER_ROLE_CONNECTOR, true, &game) == SPLITTER_STATUS_OK);
    int64_t reply = -1;
    size_t v = 0, rounds = 0;
    while (!splitter_game_is_finished(game)) {
        SplitterStatus st = splitter_game_move(game, v, &reply);
        if (st == SPLITTER_STATUS_ILLEGAL_MOVE) {
            v++;
            continue;
        }
        CHECK(st == SPLITTER_STATUS_OK);
        rounds++;
    }
    CHECK(rounds <= 3);

    splitter_game_free(game);
    splitter_engine_free(e);
    splitter_graph_free(g);
    printf("ok\n");
    return 0;
}
