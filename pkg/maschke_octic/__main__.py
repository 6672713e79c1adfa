from maschke_octic.cli import main

main()
