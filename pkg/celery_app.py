# celery_app.py
from celery import Celery
import os
from dotenv import load_dotenv

load_dotenv()

REDIS_HOST = os.getenv("REDIS_HOST", "localhost")
REDIS_PORT = os.getenv("REDIS_PORT", "6379")

app = Celery(
    'central_spin_classifier',
    broker=f'redis://{REDIS_HOST}:{REDIS_PORT}/0',
    backend=f'redis://{REDIS_HOST}:{REDIS_PORT}/0',
    include=['tasks']
)

app.conf.update(
    # ==================== Serialization ====================
    task_serializer='json',
    accept_content=['json'],
    result_serializer='json',

    # ==================== Task Limits ====================
    # Classifier runs take tens of minutes single-threaded
    task_time_limit=int(os.getenv('TASK_TIME_LIMIT', 7200)),
    task_soft_time_limit=int(os.getenv('TASK_SOFT_TIME_LIMIT', 7000)),

    # ==================== Memory & Performance ====================
    worker_prefetch_multiplier=1,
    worker_max_tasks_per_child=10,
    worker_disable_rate_limits=True,

    # ==================== Task Reliability ====================
    task_acks_late=True,
    task_reject_on_worker_lost=True,
    task_track_started=True,

    # ==================== Result Settings ====================
    result_expires=86400,
    result_persistent=False,

    # ==================== Broker Settings ====================
    broker_connection_retry_on_startup=True,

    # ==================== Queue Configuration ====================
    task_default_queue='training',
    task_routes={
        'tasks.prepare_single_target': {'queue': 'training'},
        'tasks.train_single_seed': {'queue': 'training'},
        'tasks.summarize_state_preparation': {'queue': 'training'},
        'tasks.summarize_classifier_sweep': {'queue': 'training'},
        'tasks.sweep_state_preparation': {'queue': 'training'},
        'tasks.sweep_classifier': {'queue': 'training'},
    },
)
