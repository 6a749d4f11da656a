from reviewgraph.graph.schema import AgentRole
from .endpoint import (BaseClient, EndpointConfig, HttpChatClient,
                       load_endpoint_config)
from .mock import MockClient, keyword_dimension, mock_client
from .embeddings import (EmbeddingCache, embed_texts, load_embeddings,
                         read_records)
from .debate import (Message, Paper, Stage, StageRecord, Transcript,
                     load_paper, load_transcript, save_transcript,
                     simulate_debate)
from .pipeline import (classify_dimensions, extract_triples, graph_texts,
                       run_pipeline)
